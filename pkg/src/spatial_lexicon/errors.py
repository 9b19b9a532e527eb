"""Exception types raised by the simulator."""


class SpatialLexiconError(Exception):
    """Base class for all errors raised by this package."""


class InvalidArgument(SpatialLexiconError, ValueError):
    pass


class ObjectNotFound(SpatialLexiconError, KeyError):
    def __init__(self, obj_id):
        super().__init__(obj_id)
        self.obj_id = obj_id

    def __str__(self):
        return f"object not found: {self.obj_id!r}"


class GenerationFailed(SpatialLexiconError):
    pass


class CorpusParseError(SpatialLexiconError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class UnsupportedVersion(SpatialLexiconError):
    pass


class StrategyMismatch(SpatialLexiconError, TypeError):
    pass


class UnknownCategory(SpatialLexiconError, KeyError):
    pass


class ProtocolError(SpatialLexiconError):
    pass


class ConfigError(SpatialLexiconError):
    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


# Recoverable interaction failures. The game module turns these into outcomes.

class InteractionFailure(SpatialLexiconError):
    reason = "unknown"


class NoDiscriminatingCategory(InteractionFailure):
    reason = "no-discriminating-category"


class UnknownWord(InteractionFailure):
    reason = "unknown-word"


class AmbiguousReference(InteractionFailure):
    reason = "ambiguous-reference"


class AdoptionDeferred(InteractionFailure):
    reason = "adoption-deferred"
