"""Exception hierarchy shared across the package."""

from __future__ import annotations


class HypergraphError(Exception):
    """Base class for all errors raised by linhyper."""


class BadEdge(HypergraphError, ValueError):
    pass


class BadVertex(HypergraphError, ValueError):
    pass


class LinearityViolation(HypergraphError, ValueError):
    def __init__(self, pair, edge_ids):
        self.pair = tuple(pair)
        self.edge_ids = tuple(edge_ids)
        super().__init__(
            f"pair {self.pair} lies in edges {self.edge_ids[0]} and {self.edge_ids[1]}"
        )


class ParseError(HypergraphError, ValueError):
    pass


class NotPrimePower(HypergraphError, ValueError):
    pass


class TooMany(HypergraphError, ValueError):
    pass


class DeleteTooMany(HypergraphError, ValueError):
    pass


class BadOrder(HypergraphError, ValueError):
    pass


class BadLength(HypergraphError, ValueError):
    pass


class NotATree(HypergraphError, ValueError):
    pass


class NotAForest(NotATree):
    pass


class LPTimeout(HypergraphError):
    """The simplex pivot budget ran out before a verdict was reached."""

    def __init__(self, pivots):
        self.pivots = pivots
        super().__init__(f"pivot budget exhausted after {pivots} pivots")


class DenominatorOverflow(HypergraphError):
    def __init__(self, D, limit):
        self.D = D
        self.limit = limit
        super().__init__(f"common denominator {D} exceeds limit {limit}")


class InfeasibleHost(HypergraphError):
    """The host has no (capped) perfect fractional matching."""

    def __init__(self, certificate):
        self.certificate = certificate
        super().__init__("host has no perfect fractional matching; certificate attached")


class Stuck(HypergraphError):
    def __init__(self, step, message):
        self.step = step
        super().__init__(f"greedy embedding stuck at step {step}: {message}")


class RetriesExhausted(HypergraphError):
    def __init__(self, condition, witness=None):
        self.condition = condition
        self.witness = witness
        super().__init__(f"reservoir condition ({condition}) failed on every retry; witness {witness}")


class NoPath(HypergraphError):
    def __init__(self, u, v):
        self.u, self.v = u, v
        super().__init__(f"no length-2 connection between {u} and {v} inside the reservoir")


class StageFailure(HypergraphError):
    STAGES = ("decompose", "reservoir", "skeleton", "tiling", "grouping", "connect", "bare-paths")

    def __init__(self, stage, diagnostics=None):
        self.stage = stage
        self.diagnostics = dict(diagnostics or {})
        detail = self.diagnostics.get("reason", "")
        super().__init__(f"embedding failed at stage '{stage}'" + (f": {detail}" if detail else ""))
