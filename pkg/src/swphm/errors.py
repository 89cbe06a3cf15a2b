"""Exception hierarchy with machine-parseable error codes.

Every error carries a short stable ``code`` so the CLI and HTTP service can
emit one parseable line alongside the human message.
"""

from __future__ import annotations


class SwphmError(Exception):
    """Base class for all toolkit errors."""

    code = "error"

    def __init__(self, message: str, code: str | None = None):
        super().__init__(message)
        if code is not None:
            self.code = code


class ValidationError(SwphmError):
    """Input data violates a schema or a domain invariant."""

    code = "validation"


class NotTrainedError(SwphmError):
    """An operation requiring a fitted model was called before training."""

    code = "model-not-trained"


class CalibrationRangeError(SwphmError):
    """Clock-speed adjustment requested outside the calibrated range."""

    code = "calibration-range"


class EnumerationCapError(SwphmError):
    """Exhaustive plan search would exceed the allocation cap."""

    code = "enumeration-cap"
