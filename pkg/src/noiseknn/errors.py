"""Exception types raised by the library."""


class NoiseKNNError(Exception):
    """Base class for all library errors."""


class MetricError(NoiseKNNError, ValueError):
    """Point kind or dimension does not match the metric."""


class DatasetError(NoiseKNNError, ValueError):
    """Malformed dataset or data file.

    ``line`` is the 1-based line number of the first offending record when
    the error came from a JSON Lines file.
    """

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ParameterError(NoiseKNNError, ValueError):
    """A numeric parameter is outside its admissible range."""


class NeighborRangeError(NoiseKNNError, IndexError):
    """Requested neighbour count k is outside 1..n."""


class RateValidityError(NoiseKNNError, ValueError):
    """Noise-rate estimates do not satisfy pi0 + pi1 < 1."""
