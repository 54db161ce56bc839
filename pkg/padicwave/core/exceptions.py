from __future__ import annotations


class PadicWaveError(Exception):
    pass


class FieldMismatchError(PadicWaveError):
    pass


class DivisionByZeroToPrecisionError(PadicWaveError):
    pass


class PrecisionExhaustedError(PadicWaveError):
    pass


class UnsupportedFieldError(PadicWaveError):
    pass


class UnboundedSetError(PadicWaveError):
    pass


class IndexOrderViolationError(PadicWaveError):
    pass


class IndexTooLargeError(PadicWaveError):
    pass


class DegreeTooHighError(PadicWaveError):
    pass


class DepthInsufficientError(PadicWaveError):
    pass


class NotTopDegreeError(PadicWaveError):
    pass


class InvalidParametersError(PadicWaveError):
    pass
