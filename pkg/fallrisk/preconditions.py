# Copyright (c) The fallrisk developers.
# Licensed under the MIT License.


class InvalidInputError(ValueError):
    """
    Raised when an input record or argument violates its documented schema or
    value range.
    """


class EmptyCohortError(ValueError):
    """
    Raised when cohort construction or featurization leaves no binary-labeled
    encounters to work with.
    """


class InvariantViolationError(RuntimeError):
    """
    Raised when an internal invariant that the inputs should make impossible is
    observed anyway.
    """


def check_argument(check: bool, message: str) -> None:
    """
    Raises a ValueError if the provided check is false

    >>> from fallrisk import preconditions
    >>> x = 5
    >>> preconditions.check_argument(x < 5, "x must be less than 5")
    Traceback (most recent call last):
        ...
    ValueError: x must be less than 5

    Parameters
    ----------
    check : bool
        The already evaluated condition
    message : str
        The message to use as the body of the ValueError

    Raises
    ------
    ValueError if ``check`` is false
    """
    if not check:
        raise ValueError(message)


def check_input(check: bool, message: str) -> None:
    """
    Raises an :class:`InvalidInputError` if the provided check is false. Used for
    record-level schema checks, so callers can tell bad data apart from bad
    arguments.

    >>> from fallrisk import preconditions
    >>> preconditions.check_input(1 > 2, "day must be positive")
    Traceback (most recent call last):
        ...
    fallrisk.preconditions.InvalidInputError: day must be positive

    Parameters
    ----------
    check : bool
        The already evaluated condition
    message : str
        The message to use as the body of the InvalidInputError
    """
    if not check:
        raise InvalidInputError(message)
