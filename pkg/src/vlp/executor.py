"""Program evaluation over cached scene representations.

A scene is a list of string rows. Object scenes hold `[object, property...]`
rows; action scenes hold `[action, participant...]` rows. A scene with no
valid content is exactly `[[]]` (one empty row), which every existence check
maps to false and every count to zero. Evaluation is total structural
recursion: well-typed programs cannot fail at runtime, except that an
enabled size predicate may miss its cached answer, which raises
SceneCacheMiss for the caller to count as a misclassification.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .dsl import App, ImageInput, IntLiteral, Program, SymbolRef, normalize_symbol
from .errors import SceneCacheMiss


@dataclass(frozen=True)
class SceneRepresentation:
    rows: tuple[tuple[str, ...], ...]

    @staticmethod
    def empty() -> "SceneRepresentation":
        return EMPTY_SCENE

    @staticmethod
    def from_rows(rows) -> "SceneRepresentation":
        """Normalize raw parsed rows: stringify, lowercase, trim, and drop
        empty rows/cells. No surviving rows collapses to the [[]] sentinel."""
        clean = []
        for row in rows:
            cells = tuple(normalize_symbol(c) for c in row if normalize_symbol(c))
            if cells:
                clean.append(cells)
        if not clean:
            return EMPTY_SCENE
        return SceneRepresentation(tuple(clean))

    @property
    def is_empty(self) -> bool:
        return len(self.content_rows) == 0

    @property
    def content_rows(self) -> tuple[tuple[str, ...], ...]:
        return tuple(r for r in self.rows if r)

    def to_lists(self) -> list[list[str]]:
        if self.is_empty:
            return [[]]
        return [list(r) for r in self.content_rows]


EMPTY_SCENE = SceneRepresentation(((),))

# Cached yes/no answers for size predicates, keyed by
# (predicate_name, (symbol_arg, ...)).
SizeAnswers = dict[tuple[str, tuple[str, ...]], bool]


def evaluate(
    program: Program,
    scene_objects: SceneRepresentation,
    scene_actions: SceneRepresentation,
    size_answers: SizeAnswers | None = None,
) -> bool:
    """Run a BOOL-typed program against one image's cached scenes."""
    return bool(_eval(program, scene_objects, scene_actions, size_answers))


def _eval(node: Program, objs: SceneRepresentation, acts: SceneRepresentation, size: SizeAnswers | None):
    if isinstance(node, ImageInput):
        return None  # only consumed by VLM functions, which ignore the value
    if isinstance(node, IntLiteral):
        return node.value
    if isinstance(node, SymbolRef):
        return node.value

    name = node.primitive.name
    if name == "get_objects":
        return objs
    if name == "get_actions":
        return acts
    if name in _SIZE_PREDICATES:
        args = tuple(c.value for c in node.children[1:] if isinstance(c, SymbolRef))
        if size is None or (name, args) not in size:
            raise SceneCacheMiss(f"no cached answer for {name}{args}")
        return size[(name, args)]

    vals = [_eval(c, objs, acts, size) for c in node.children]
    fn = _SEMANTICS[name]
    return fn(*vals)


def _rows(scene: SceneRepresentation):
    return scene.content_rows


def _exists_object(s, o):
    return any(r[0] == o for r in _rows(s))


def _exists_property(s, p):
    return any(p in r[1:] for r in _rows(s))


def _exists_object_with_property(s, o, p):
    return any(r[0] == o and p in r[1:] for r in _rows(s))


def _exists_properties(s, p1, p2):
    return any(p1 in r[1:] and p2 in r[1:] for r in _rows(s))


def _exists_object_with_properties(s, o, p1, p2):
    return any(r[0] == o and p1 in r[1:] and p2 in r[1:] for r in _rows(s))


def _count_object_in_img(s, o):
    return sum(1 for r in _rows(s) if r[0] == o)


def _count_objects_with_property(s, p):
    return sum(1 for r in _rows(s) if p in r[1:])


def _count_all_objects(s):
    return len(_rows(s))


def _max_objects_of_same_type(s):
    heads = Counter(r[0] for r in _rows(s))
    return max(heads.values(), default=0)


_SEMANTICS = {
    "exists_object": _exists_object,
    "exists_property": _exists_property,
    "exists_object_with_property": _exists_object_with_property,
    "exists_properties": _exists_properties,
    "exists_object_with_properties": _exists_object_with_properties,
    # action rows share the row-matching semantics: head match, tail membership
    "exists_action": _exists_object,
    "exists_action_with_object": _exists_object_with_property,
    "count_object_in_img": _count_object_in_img,
    "count_objects_with_property": _count_objects_with_property,
    "count_all_objects": _count_all_objects,
    "max_objects_of_same_type": _max_objects_of_same_type,
    "and": lambda a, b: a and b,
    "or": lambda a, b: a or b,
    "not": lambda a: not a,
    "xor": lambda a, b: bool(a) != bool(b),
    "gt?": lambda a, b: a > b,
    "eq?": lambda a, b: a == b,
}

_SIZE_PREDICATES = frozenset(
    [
        "exists_object_small_in_img",
        "exists_object_large_in_img",
        "exists_object_with_property_small_in_img",
        "exists_object_with_property_large_in_img",
    ]
)
