"""
Exceptions raised by the frame analysis toolkit.

Every error derives from FrameOptError (itself a ValueError) so callers can
catch the whole family at once. The CLI maps SchemaError and ConfigError to
exit code 2 and every other FrameOptError to exit code 3.
"""


class FrameOptError(ValueError):
    """Base class for all toolkit errors"""


# Linear algebra

class RankDeficient(FrameOptError):
    """The vectors do not span the space (not a frame)"""


class DimensionMismatch(FrameOptError):
    """Shapes of frames, coefficient vectors or matrices disagree"""


class NotUnitary(FrameOptError):
    """A matrix expected to be unitary is not"""


class NotTight(FrameOptError):
    """Operation requires a tight frame"""


class NotDual(FrameOptError):
    """G is not a dual frame of F"""


# Probabilities and erasures

class DegenerateProbability(FrameOptError):
    """Some erasure probability equals 1, so its weight number is undefined"""


class NotNormalized(FrameOptError):
    """Erasure probabilities are out of range or do not sum to 1"""


class BadMultiplicity(FrameOptError):
    """Erasure multiplicity outside 1..N"""


# Construction

class MajorizationFailed(FrameOptError):
    """Squared norms are not majorized by the spectrum"""


class NotSorted(FrameOptError):
    """Sequence must be sorted in nonincreasing order"""


# Inputs

class SchemaError(FrameOptError):
    """A frame file does not match the expected schema"""


class ConfigError(FrameOptError):
    """Invalid configuration value"""
