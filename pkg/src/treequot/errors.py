"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class TreeQuotError(Exception):
    """Base class for all errors raised by treequot."""


class ParseError(TreeQuotError):
    def __init__(self, message: str, text: str = "", pos: int | None = None):
        self.message = message
        self.text = text
        self.pos = pos
        super().__init__(self.describe())

    def describe(self) -> str:
        if self.pos is None:
            return self.message
        line = self.text.count("\n", 0, self.pos) + 1
        col = self.pos - (self.text.rfind("\n", 0, self.pos) + 1) + 1
        return f"{line}:{col}: {self.message}"


class UnknownSymbol(TreeQuotError, KeyError):
    def __str__(self) -> str:
        return f"undeclared symbol {self.args[0]!r}"


class ArityError(TreeQuotError):
    pass


class MalformedTree(TreeQuotError):
    pass


class AnalysisError(TreeQuotError):
    """An expression violates a homogeneity or index-disjointness requirement."""

    def __init__(self, message: str, node=None):
        self.node = node
        if node is not None:
            message = f"{message} in `{node}`"
        super().__init__(message)


class BudgetExhausted(TreeQuotError):
    def __init__(self, budget: int, frontier=()):
        self.budget = budget
        self.frontier = list(frontier)
        super().__init__(f"more than {budget} distinct quotient states")


class NotDeterministic(TreeQuotError):
    pass
