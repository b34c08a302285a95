"""Exception hierarchy shared by every module."""

from __future__ import annotations


class TropfanError(Exception):
    """Base class for all library errors."""


# matroid axioms / constructors

class MatroidError(TropfanError):
    pass


class EmptyBases(MatroidError):
    def __init__(self):
        super().__init__("a matroid needs at least one basis")


class UnequalCardinality(MatroidError):
    def __init__(self, sizes):
        self.sizes = sorted(sizes)
        super().__init__(f"bases have differing cardinalities {self.sizes}")


class ExchangeAxiomViolation(MatroidError):
    def __init__(self, b1, b2, x):
        self.b1, self.b2, self.x = tuple(b1), tuple(b2), x
        super().__init__(
            f"basis exchange fails for B1={self.b1}, B2={self.b2}, x={x}"
        )


class LoopDetected(MatroidError):
    def __init__(self, element):
        self.element = element
        super().__init__(f"element {element} lies in no basis (loop)")


class ParameterOutOfRange(TropfanError):
    pass


# linear algebra

class DependentGenerators(TropfanError):
    def __init__(self, rank, count):
        super().__init__(f"{count} generators only span a rank-{rank} space")


class NotFullRank(TropfanError):
    def __init__(self, rank, rows):
        self.rank, self.rows = rank, rows
        super().__init__(f"matrix has rank {rank} but {rows} rows")


class LoopColumn(TropfanError):
    def __init__(self, column):
        self.column = column
        super().__init__(f"column {column} is zero (a loop)")


class DimensionMismatch(TropfanError):
    pass


# fans

class FanError(TropfanError):
    pass


class NotPure(FanError):
    pass


class NotSimplicial(FanError):
    pass


class FanValidationError(FanError):
    def __init__(self, report):
        self.report = report
        kinds = sorted({v.kind for v in report.violations})
        super().__init__(f"invalid fan: {', '.join(kinds)}")


# matroid fans / realizations

class RankZero(TropfanError):
    def __init__(self):
        super().__init__("matroid has rank zero")


class NotABasis(TropfanError):
    def __init__(self, subset):
        self.subset = tuple(subset)
        super().__init__(f"{self.subset} is not a basis")


class NoBasis(TropfanError):
    pass


class GuardError(TropfanError):
    """An enumeration would exceed its work bound; nothing was truncated."""

    def __init__(self, estimate, limit, what):
        self.estimate, self.limit = estimate, limit
        super().__init__(f"{what}: estimated work {estimate} exceeds limit {limit}")


class SearchTooLarge(GuardError):
    def __init__(self, estimate, limit):
        super().__init__(estimate, limit, "realization search too large")


class EnumerationTooLarge(GuardError):
    def __init__(self, estimate, limit):
        super().__init__(estimate, limit, "subspace enumeration too large")
