"""Analytic SDPs with known answers, shared by the unit and acceptance tests."""

import numpy as np

from secure_layered.sdp import Constraint, SdpProblem


def trace_floor():
    """min Tr(X) s.t. Tr(X) >= 1, X in H^2_+  ->  1."""
    p = SdpProblem([("X", 2)], [], {"X": 1.0}, [Constraint("c", ">=", 1.0, {"X": np.eye(2)})])
    return p, 1.0


def weighted_trace():
    """min Tr(X) s.t. Tr(diag(1, 2) X) >= 1  ->  0.5 at X = 0.5 e2 e2^T."""
    A = np.diag([1.0, 2.0])
    p = SdpProblem([("X", 2)], [], {"X": 1.0}, [Constraint("c", ">=", 1.0, {"X": A})])
    return p, 0.5


def contradictory_bounds():
    """min x s.t. x >= 1, x <= 0  ->  infeasible."""
    rows = [Constraint("lo", ">=", 1.0, scalars={"x": 1.0}),
            Constraint("hi", "<=", 0.0, scalars={"x": 1.0})]
    return SdpProblem([], ["x"], {"x": 1.0}, rows), None


CORPUS = {"trace_floor": trace_floor, "weighted_trace": weighted_trace,
          "contradictory_bounds": contradictory_bounds}
