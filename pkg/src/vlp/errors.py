"""Exception hierarchy shared across the pipeline.

Exit codes used by the CLI: 0 success, 2 configuration error, 3 transport
error, 4 synthesis produced no candidate.
"""

from __future__ import annotations


class VlpError(Exception):
    """Base class for all errors raised by this package."""

    exit_code = 1


class ConfigurationError(VlpError):
    """Invalid profile, DSL config, task file, or run configuration."""

    exit_code = 2


class GrammarBuildError(ConfigurationError):
    """The grammar cannot derive the start symbol from the given config."""


class UnderivableProgramError(VlpError):
    """A program references a primitive or symbol absent from the grammar."""

    def __init__(self, message: str, node_path: tuple[int, ...] = ()):
        super().__init__(message)
        self.node_path = node_path


class ParseError(VlpError):
    """Malformed program text; `offset` is the byte position of the fault."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (offset {offset})")
        self.offset = offset


class TransportError(VlpError):
    """HTTP, auth, or mock-backend failure while talking to the VLM."""

    exit_code = 3


class SceneCacheMiss(VlpError):
    """A required perception output is absent from the cache."""


class NoCandidateError(VlpError):
    """Search finished without evaluating a single candidate program."""

    exit_code = 4


class FixtureGenerationError(VlpError):
    """The requested synthetic task cannot be realised from the vocabulary."""

    exit_code = 2
