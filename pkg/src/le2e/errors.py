"""Exception taxonomy shared by every module.

The CLI maps these onto exit codes: InputError and bad usage exit 2,
FormatError/DataError and OS-level failures exit 3, verification
failures exit 1.
"""


class Le2eError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(Le2eError):
    """A configuration or shape contract was violated (wrong block count,

    missing weight tensor, indivisible heads, kernel smaller than stride).
    """


class InputError(Le2eError):
    """Runtime input outside the operation's domain (empty durations,

    mismatched lengths, audio shorter than one analysis window).
    """


class FormatError(Le2eError):
    """Weight file violates the v1 binary format. Carries the byte offset."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


class DataError(Le2eError):
    """Tensor payload is invalid (non-finite values). Names the tensor."""

    def __init__(self, message: str, tensor_name: str):
        super().__init__(f"{message}: tensor '{tensor_name}'")
        self.tensor_name = tensor_name
