"""Semantic types, the primitive catalog, and the typed program AST.

The type vocabulary is closed: images, booleans, integers, the three
grounded-symbol kinds (objects, properties, actions), and SCENE, the nested
string-list representation that perception functions return. Primitives are
typed signatures over these tags; programs are applications of primitives
with symbol strings, integer literals, and the image input as leaves.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from pathlib import Path

from .errors import ConfigurationError


class SemanticType(enum.Enum):
    IMG = "IMG"
    BOOL = "BOOL"
    INT = "INT"
    OBJECT = "OBJECT"
    PROPERTY = "PROPERTY"
    ACTION = "ACTION"
    SCENE = "SCENE"

    def __str__(self) -> str:  # pragma: no cover - repr sugar
        return self.value


SYMBOL_TYPES = (SemanticType.OBJECT, SemanticType.PROPERTY, SemanticType.ACTION)


class PrimitiveKind(enum.Enum):
    VLM_FUNCTION = "vlm_function"
    SYMBOLIC_FUNCTION = "symbolic_function"
    OPERATOR = "operator"
    CONSTANT = "constant"
    INPUT_VARIABLE = "input_variable"


@dataclass(frozen=True)
class Primitive:
    """A named DSL entry: argument types plus a return type.

    Constants and the image input have arity 0. VLM functions take exactly
    one IMG argument (grounded symbol sets are bound at configuration time,
    so they do not appear in the signature).
    """

    name: str
    kind: PrimitiveKind
    arg_types: tuple[SemanticType, ...]
    return_type: SemanticType

    @property
    def arity(self) -> int:
        return len(self.arg_types)

    def __post_init__(self) -> None:
        if self.kind in (PrimitiveKind.CONSTANT, PrimitiveKind.INPUT_VARIABLE):
            if self.arity != 0:
                raise ValueError(f"{self.name}: constants/variables have arity 0")
        if self.kind is PrimitiveKind.VLM_FUNCTION:
            if sum(1 for t in self.arg_types if t is SemanticType.IMG) != 1:
                raise ValueError(f"{self.name}: VLM functions take exactly one IMG argument")


# ---------------------------------------------------------------------------
# Program AST
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ImageInput:
    """The single input variable; type IMG, depth 0."""

    def __repr__(self) -> str:
        return "ImageInput()"


IMG_INPUT = ImageInput()


@dataclass(frozen=True)
class IntLiteral:
    value: int


@dataclass(frozen=True)
class SymbolRef:
    """A grounded-symbol terminal. The tag records which vocabulary the
    string was drawn from (OBJECT, PROPERTY, or ACTION); it is assigned from
    the argument slot when parsing."""

    value: str
    sym_type: SemanticType

    def __post_init__(self) -> None:
        if self.sym_type not in SYMBOL_TYPES:
            raise ValueError(f"symbol tag must be OBJECT/PROPERTY/ACTION, got {self.sym_type}")


@dataclass(frozen=True)
class App:
    """Application of a primitive to child expressions."""

    primitive: Primitive
    children: tuple["Program", ...]


Program = App | SymbolRef | IntLiteral | ImageInput


def depth(program: Program) -> int:
    """Application-nesting depth: leaves are 0, an application is one more
    than its deepest child."""
    if isinstance(program, App):
        return 1 + max((depth(c) for c in program.children), default=0)
    return 0


def node_type(program: Program) -> SemanticType:
    if isinstance(program, App):
        return program.primitive.return_type
    if isinstance(program, SymbolRef):
        return program.sym_type
    if isinstance(program, IntLiteral):
        return SemanticType.INT
    return SemanticType.IMG


def iter_nodes(program: Program):
    """Preorder traversal yielding (path, node)."""
    stack = [((), program)]
    while stack:
        path, node = stack.pop()
        yield path, node
        if isinstance(node, App):
            for i in reversed(range(len(node.children))):
                stack.append((path + (i,), node.children[i]))


@dataclass(frozen=True)
class TypecheckReport:
    ok: bool
    error_path: tuple[int, ...] | None = None
    message: str | None = None


def typecheck(program: Program) -> TypecheckReport:
    """Structural type validation: every child's type must equal the
    parent's declared argument type and the root must be BOOL. Total; returns
    a report with the first offending node path on failure."""

    def check(node: Program, expected: SemanticType, path: tuple[int, ...]) -> TypecheckReport | None:
        actual = node_type(node)
        if actual is not expected:
            return TypecheckReport(False, path, f"expected {expected}, found {actual}")
        if isinstance(node, App):
            if len(node.children) != node.primitive.arity:
                return TypecheckReport(
                    False, path,
                    f"{node.primitive.name} expects {node.primitive.arity} args, got {len(node.children)}",
                )
            for i, (child, arg_t) in enumerate(zip(node.children, node.primitive.arg_types)):
                bad = check(child, arg_t, path + (i,))
                if bad is not None:
                    return bad
        return None

    bad = check(program, SemanticType.BOOL, ())
    return bad if bad is not None else TypecheckReport(True)


# ---------------------------------------------------------------------------
# Primitive catalog
# ---------------------------------------------------------------------------

_T = SemanticType
_K = PrimitiveKind


def _prim(name: str, kind: PrimitiveKind, args: tuple[SemanticType, ...], ret: SemanticType) -> Primitive:
    return Primitive(name, kind, args, ret)


GET_OBJECTS = _prim("get_objects", _K.VLM_FUNCTION, (_T.IMG,), _T.SCENE)
GET_ACTIONS = _prim("get_actions", _K.VLM_FUNCTION, (_T.IMG,), _T.SCENE)

_SYMBOLIC = [
    _prim("exists_object", _K.SYMBOLIC_FUNCTION, (_T.SCENE, _T.OBJECT), _T.BOOL),
    _prim("exists_object_with_property", _K.SYMBOLIC_FUNCTION, (_T.SCENE, _T.OBJECT, _T.PROPERTY), _T.BOOL),
    _prim("exists_property", _K.SYMBOLIC_FUNCTION, (_T.SCENE, _T.PROPERTY), _T.BOOL),
    _prim("exists_properties", _K.SYMBOLIC_FUNCTION, (_T.SCENE, _T.PROPERTY, _T.PROPERTY), _T.BOOL),
    _prim("exists_object_with_properties", _K.SYMBOLIC_FUNCTION, (_T.SCENE, _T.OBJECT, _T.PROPERTY, _T.PROPERTY), _T.BOOL),
    _prim("exists_action", _K.SYMBOLIC_FUNCTION, (_T.SCENE, _T.ACTION), _T.BOOL),
    _prim("exists_action_with_object", _K.SYMBOLIC_FUNCTION, (_T.SCENE, _T.ACTION, _T.OBJECT), _T.BOOL),
    _prim("count_object_in_img", _K.SYMBOLIC_FUNCTION, (_T.SCENE, _T.OBJECT), _T.INT),
    _prim("count_objects_with_property", _K.SYMBOLIC_FUNCTION, (_T.SCENE, _T.PROPERTY), _T.INT),
    _prim("max_objects_of_same_type", _K.SYMBOLIC_FUNCTION, (_T.SCENE,), _T.INT),
    _prim("count_all_objects", _K.SYMBOLIC_FUNCTION, (_T.SCENE,), _T.INT),
]

_OPERATORS = [
    _prim("and", _K.OPERATOR, (_T.BOOL, _T.BOOL), _T.BOOL),
    _prim("or", _K.OPERATOR, (_T.BOOL, _T.BOOL), _T.BOOL),
    _prim("not", _K.OPERATOR, (_T.BOOL,), _T.BOOL),
    _prim("xor", _K.OPERATOR, (_T.BOOL, _T.BOOL), _T.BOOL),
    _prim("gt?", _K.OPERATOR, (_T.INT, _T.INT), _T.BOOL),
    _prim("eq?", _K.OPERATOR, (_T.INT, _T.INT), _T.BOOL),
]

SIZE_PREDICATES = [
    _prim("exists_object_small_in_img", _K.VLM_FUNCTION, (_T.IMG, _T.OBJECT), _T.BOOL),
    _prim("exists_object_large_in_img", _K.VLM_FUNCTION, (_T.IMG, _T.OBJECT), _T.BOOL),
    _prim("exists_object_with_property_small_in_img", _K.VLM_FUNCTION, (_T.IMG, _T.OBJECT, _T.PROPERTY), _T.BOOL),
    _prim("exists_object_with_property_large_in_img", _K.VLM_FUNCTION, (_T.IMG, _T.OBJECT, _T.PROPERTY), _T.BOOL),
]

SIZE_PREDICATE_NAMES = tuple(p.name for p in SIZE_PREDICATES)


def int_constant(value: int) -> Primitive:
    return _prim(str(value), _K.CONSTANT, (), _T.INT)


def _named(*names: str) -> list[Primitive]:
    table = {p.name: p for p in [GET_OBJECTS, GET_ACTIONS, *_SYMBOLIC, *_OPERATORS, *SIZE_PREDICATES]}
    return [table[n] for n in names]


_BONGARD_HOI = _named(
    "get_objects", "get_actions",
    "exists_object", "exists_object_with_property", "exists_property",
    "exists_action", "exists_action_with_object",
    "and", "or", "not",
)
_BONGARD_OW = _BONGARD_HOI + _named("exists_properties", "exists_object_with_properties")
_COUNTING = _named(
    "count_object_in_img", "count_objects_with_property",
    "max_objects_of_same_type", "count_all_objects",
    "xor", "gt?", "eq?",
)
_BONGARD_RWR = _BONGARD_OW + _COUNTING
_COCOLOGIC = _BONGARD_HOI + _COUNTING
_CLEVR_HANS3 = [p for p in _BONGARD_OW if p.name not in ("get_actions", "exists_action", "exists_action_with_object")]

_PROFILE_HAS_CONSTANTS = {"bongard-rwr", "cocologic"}

_PROFILES: dict[str, list[Primitive]] = {
    "bongard-hoi": _BONGARD_HOI,
    "bongard-ow": _BONGARD_OW,
    "bongard-rwr": _BONGARD_RWR,
    "cocologic": _COCOLOGIC,
    "clevr-hans3": _CLEVR_HANS3,
}

PROFILE_NAMES = tuple(_PROFILES) + ("custom",)

# Per-profile defaults: search depth bound and how many object/property/action
# symbols grounding asks for.
PROFILE_MAX_DEPTH = {
    "bongard-hoi": 4,
    "bongard-ow": 4,
    "bongard-rwr": 6,
    "cocologic": 6,
    "clevr-hans3": 6,
    "custom": 4,
}
PROFILE_SYMBOL_COUNTS = {
    "bongard-hoi": (10, 5, 10),
    "bongard-ow": (10, 10, 3),
    "bongard-rwr": (10, 10, 5),
    "cocologic": (10, 10, 3),
    "clevr-hans3": (10, 10, 0),
}
DEFAULT_TIME_LIMIT_SECS = 10.0


def catalog(dataset_profile: str, config: "DslConfig | None" = None) -> list[Primitive]:
    """Primitive list for a dataset profile. With a config, the list is
    resolved from `config.enabled_primitives` plus any enabled size
    predicates, so DSL edits can both shrink and extend the profile set.
    Integer constants are emitted where the profile (or config) uses them."""
    if dataset_profile not in PROFILE_NAMES:
        raise ConfigurationError(
            f"unknown dataset profile {dataset_profile!r}; known: {', '.join(PROFILE_NAMES)}"
        )
    if config is None:
        if dataset_profile == "custom":
            raise ConfigurationError("profile 'custom' requires a DSL config")
        prims = list(_PROFILES[dataset_profile])
        if dataset_profile in _PROFILE_HAS_CONSTANTS:
            prims += [int_constant(v) for v in range(0, 7)]
        return prims

    prims = []
    for name in config.enabled_primitives:
        p = primitive_by_name(name)
        if p is None:
            raise ConfigurationError(
                f"unknown primitive {name!r}; valid names: {', '.join(all_primitive_names())}"
            )
        if isinstance(p, Primitive) and p.kind is PrimitiveKind.CONSTANT:
            continue  # constants come from int_constant_max below
        if p not in prims:
            prims.append(p)
    for name in config.extra_perception_predicates:
        if name not in SIZE_PREDICATE_NAMES:
            raise ConfigurationError(f"unknown perception predicate {name!r}")
    prims += [p for p in SIZE_PREDICATES if p.name in config.extra_perception_predicates and p not in prims]

    wants_constants = any(n.isdigit() for n in config.enabled_primitives)
    if wants_constants:
        prims += [int_constant(v) for v in range(0, config.int_constant_max + 1)]
    return prims


_BY_NAME = {p.name: p for p in [GET_OBJECTS, GET_ACTIONS, *_SYMBOLIC, *_OPERATORS, *SIZE_PREDICATES]}


def primitive_by_name(name: str) -> Primitive | None:
    if name in _BY_NAME:
        return _BY_NAME[name]
    if name.isdigit():
        return int_constant(int(name))
    return None


def all_primitive_names() -> list[str]:
    return sorted(_BY_NAME)


# ---------------------------------------------------------------------------
# DSL configuration (the edit surface)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DslConfig:
    """Editable DSL surface: which primitives are live, the integer-constant
    range, symbols banned from the grammar, optional size predicates, and
    whether object and action scenes are kept as distinct grammar types."""

    profile: str = "custom"
    enabled_primitives: tuple[str, ...] = ()
    int_constant_max: int = 6
    removed_symbols: frozenset[str] = frozenset()
    extra_perception_predicates: tuple[str, ...] = ()
    strict_scene_typing: bool = False

    @staticmethod
    def for_profile(profile: str) -> "DslConfig":
        if profile == "custom":
            return DslConfig()
        names = tuple(p.name for p in catalog(profile))
        return DslConfig(profile=profile, enabled_primitives=names)

    def with_edits(
        self,
        add_primitives: tuple[str, ...] = (),
        remove_primitives: tuple[str, ...] = (),
        remove_symbols: tuple[str, ...] = (),
        restore_symbols: tuple[str, ...] = (),
    ) -> "DslConfig":
        for name in add_primitives + remove_primitives:
            if primitive_by_name(name) is None:
                raise ConfigurationError(
                    f"unknown primitive {name!r}; valid names: {', '.join(all_primitive_names())}"
                )
        enabled = [n for n in self.enabled_primitives if n not in remove_primitives]
        extra = [n for n in self.extra_perception_predicates if n not in remove_primitives]
        for name in add_primitives:
            if name in SIZE_PREDICATE_NAMES:
                if name not in extra:
                    extra.append(name)
            elif name not in enabled:
                enabled.append(name)
        removed = (self.removed_symbols | {_norm(s) for s in remove_symbols}) - {_norm(s) for s in restore_symbols}
        return DslConfig(
            profile=self.profile,
            enabled_primitives=tuple(enabled),
            int_constant_max=self.int_constant_max,
            removed_symbols=frozenset(removed),
            extra_perception_predicates=tuple(extra),
            strict_scene_typing=self.strict_scene_typing,
        )

    def to_dict(self) -> dict:
        return {
            "profile": self.profile,
            "enabled_primitives": list(self.enabled_primitives),
            "int_constant_max": self.int_constant_max,
            "removed_symbols": sorted(self.removed_symbols),
            "extra_perception_predicates": list(self.extra_perception_predicates),
            "strict_scene_typing": self.strict_scene_typing,
        }

    @staticmethod
    def from_dict(data: dict) -> "DslConfig":
        try:
            return DslConfig(
                profile=data.get("profile", "custom"),
                enabled_primitives=tuple(data.get("enabled_primitives", ())),
                int_constant_max=int(data.get("int_constant_max", 6)),
                removed_symbols=frozenset(_norm(s) for s in data.get("removed_symbols", ())),
                extra_perception_predicates=tuple(data.get("extra_perception_predicates", ())),
                strict_scene_typing=bool(data.get("strict_scene_typing", False)),
            )
        except (TypeError, ValueError) as exc:
            raise ConfigurationError(f"bad DSL config: {exc}") from exc

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2) + "\n", encoding="utf-8")

    @staticmethod
    def load(path: str | Path) -> "DslConfig":
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigurationError(f"cannot read DSL config {path}: {exc}") from exc
        return DslConfig.from_dict(data)


def _norm(symbol: str) -> str:
    """Symbols are compared lowercased and whitespace-trimmed."""
    return " ".join(str(symbol).strip().lower().split())


normalize_symbol = _norm
