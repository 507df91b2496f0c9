"""
chordlab error hierarchy
Every error raised by the package derives from ChordlabError
"""


class ChordlabError(Exception):
    """Base class for all chordlab errors"""


class InvalidArgumentError(ChordlabError, ValueError):
    """An operation received an argument outside its domain"""


class InvalidDiagramError(InvalidArgumentError):
    """A partial chord diagram violates its structural invariants"""


class TruncationMismatchError(ChordlabError):
    """Two series with different truncation bounds were combined"""


class ModelMismatchError(ChordlabError):
    """An operator piece was applied to variables of another model"""


class SeriesError(ChordlabError):
    """exp/log preconditions do not hold"""


class MissingCensusError(ChordlabError):
    """A census block required by the truncation was not supplied"""


class ConsistencyError(ChordlabError, AssertionError):
    """An internal invariant was violated"""


class ConfigError(ChordlabError):
    """Invalid command-line flags or config file"""
