"""Exception hierarchy shared by every module."""


class QuasigroupError(ValueError):
    pass


class LengthMismatch(QuasigroupError):
    def __init__(self, expected, got, position=None):
        self.expected = expected
        self.got = got
        self.position = position
        msg = f"expected {expected} entries, got {got}"
        if position is not None:
            msg += f" (input ends at {position})"
        super().__init__(msg)


class ValueOutOfRange(QuasigroupError):
    def __init__(self, index, value):
        self.index = index
        self.value = value
        super().__init__(f"entry {index} has value {value!r}, expected one of 0,1,2,3")


class LatinViolation(QuasigroupError):
    """A line of the value array is not a permutation.

    ``coordinate`` is the 1-based varying argument; ``fixed`` holds the full
    argument tuple with the varying position set to ``None``.
    """

    def __init__(self, coordinate, fixed):
        self.coordinate = coordinate
        self.fixed = tuple(fixed)
        super().__init__(f"line along coordinate {coordinate} at {self.fixed} is not a permutation")


class ArityMismatch(QuasigroupError):
    pass


class NotNormalized(QuasigroupError):
    pass


class NotStandardlySemilinear(QuasigroupError):
    pass


class NoInnerEdge(QuasigroupError):
    pass


class ConditionViolation(QuasigroupError):
    pass


class HypothesisFailed(QuasigroupError):
    """Some principal 3- or 4-retract is irreducible.

    ``fixings`` maps 1-based input coordinates to their fixed values and
    ``retract`` is the offending irreducible quasigroup.
    """

    def __init__(self, fixings, retract):
        self.fixings = dict(fixings)
        self.retract = retract
        super().__init__(f"irreducible principal {retract.n}-retract at fixings {self.fixings}")


class UnsupportedArity(QuasigroupError):
    pass


class FormatError(QuasigroupError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)


class MissingEdge(FormatError):
    def __init__(self, edge):
        self.edge = edge
        super().__init__(f"missing edge {{{edge[0]},{edge[1]}}}")
