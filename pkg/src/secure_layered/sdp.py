"""Small dense primal-dual interior-point solver for complex Hermitian SDPs.

Problems are stated over named Hermitian PSD blocks and named nonnegative
scalars, with linear trace-form constraints of sense ``<=``, ``>=`` or ``==``::

    minimize    sum_b Tr(C_b X_b) + sum_s c_s x_s
    subject to  sum_b Tr(A_jb X_b) + sum_s a_js x_s  (<=, >=, ==)  r_j
                X_b PSD,  x_s >= 0

Internally every complex block of order n is mapped to a real symmetric
block of order 2n through ``A -> [[Re A, -Im A], [Im A, Re A]] / 2`` (the
halving keeps trace inner products equal to the complex ones), inequalities
receive nonnegative slacks, rows are scaled to unit norm, and the resulting
standard-form pair is solved with HKM search directions and Mehrotra's
predictor-corrector. Blocks of equal order are stacked so that each iteration
costs a handful of batched LAPACK calls.
"""

from __future__ import annotations

import enum
import io
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np
import scipy.linalg

from .linalg import as_hermitian

__all__ = [
    "Status",
    "Constraint",
    "SdpProblem",
    "SdpSolution",
    "IterateInfo",
    "ResidualReport",
    "SolverOptions",
    "solve",
    "residual_report",
    "dump_problem",
    "load_problem",
]

SENSES = ("<=", ">=", "==")


class Status(str, enum.Enum):
    OPTIMAL = "Optimal"
    INFEASIBLE = "Infeasible"
    UNBOUNDED = "Unbounded"
    NUMERICAL_FAILURE = "NumericalFailure"


@dataclass
class Constraint:
    """One linear row: ``sum Tr(blocks[b] X_b) + sum scalars[s] x_s  sense  rhs``."""

    name: str
    sense: str
    rhs: float
    blocks: dict[str, np.ndarray] = field(default_factory=dict)
    scalars: dict[str, float] = field(default_factory=dict)


@dataclass
class SdpProblem:
    """Hermitian SDP in the named-variable form described in the module doc.

    ``objective`` maps a variable name to its cost: a float for a scalar or a
    trace weight (``c * Tr(X_b)``), or a Hermitian matrix for a general block
    cost ``Tr(C_b X_b)``.
    """

    blocks: list[tuple[str, int]]
    scalars: list[str]
    objective: dict[str, object]
    constraints: list[Constraint]
    tag: str | None = None

    def block_dims(self) -> dict[str, int]:
        return dict(self.blocks)

    def validate(self) -> None:
        dims = self.block_dims()
        names = list(dims) + list(self.scalars)
        if not names:
            raise ValueError("problem has no variables")
        if len(set(names)) != len(names):
            raise ValueError("variable names must be unique")
        for name, n in self.blocks:
            if int(n) < 1:
                raise ValueError(f"block {name!r} has nonpositive order {n}")
        for name, coef in self.objective.items():
            if name in dims:
                if np.ndim(coef) == 0:
                    continue
                c = as_hermitian(coef)
                if c.shape != (dims[name], dims[name]):
                    raise ValueError(f"objective matrix for {name!r} has shape {c.shape}")
            elif name in self.scalars:
                if np.ndim(coef) != 0:
                    raise ValueError(f"scalar {name!r} needs a scalar cost")
            else:
                raise ValueError(f"objective references unknown variable {name!r}")
        seen = set()
        for con in self.constraints:
            if con.name in seen:
                raise ValueError(f"duplicate constraint name {con.name!r}")
            seen.add(con.name)
            if con.sense not in SENSES:
                raise ValueError(f"constraint {con.name!r}: bad sense {con.sense!r}")
            if not np.isfinite(con.rhs):
                raise ValueError(f"constraint {con.name!r}: rhs must be finite")
            for b, a in con.blocks.items():
                if b not in dims:
                    raise ValueError(f"constraint {con.name!r} references unknown block {b!r}")
                a = as_hermitian(a)
                if a.shape != (dims[b], dims[b]):
                    raise ValueError(
                        f"constraint {con.name!r}: block {b!r} coefficient has shape {a.shape}"
                    )
            for s, a in con.scalars.items():
                if s not in self.scalars:
                    raise ValueError(f"constraint {con.name!r} references unknown scalar {s!r}")
                if not np.isfinite(a):
                    raise ValueError(f"constraint {con.name!r}: non-finite scalar coefficient")


@dataclass
class IterateInfo:
    iteration: int
    primal_objective: float
    dual_objective: float
    primal_infeasibility: float
    dual_infeasibility: float
    mu: float


@dataclass
class SdpSolution:
    """Solver output.

    ``duals`` are sign-normalized: nonnegative for inequality rows whenever
    the solution is optimal, free for equality rows. ``dual_blocks`` holds the
    dual slack matrix ``C_b - sum_j y_j A_jb`` of every block.
    """

    status: Status
    blocks: dict[str, np.ndarray]
    scalars: dict[str, float]
    objective_value: float
    dual_objective: float
    duals: dict[str, float]
    dual_blocks: dict[str, np.ndarray]
    gap: float
    primal_infeasibility: float
    dual_infeasibility: float
    iterations: int
    history: list[IterateInfo] = field(default_factory=list, repr=False)


@dataclass(frozen=True)
class SolverOptions:
    """Stopping rules.

    Iteration stops early once the relative gap reaches ``gap_tol``. If
    progress stalls first, the best iterate is still reported optimal
    provided it meets ``feas_tol`` and ``accept_gap_tol``.
    """

    max_iter: int = 200
    feas_tol: float = 1e-8
    gap_tol: float = 1e-9
    accept_gap_tol: float = 1e-7
    step_fraction: float = 0.98
    infeas_tol: float = 1e-8


# --------------------------------------------------------------------------
# real embedding


def _embed(a: np.ndarray) -> np.ndarray:
    re, im = a.real, a.imag
    return 0.5 * np.block([[re, -im], [im, re]])


def _unembed(x: np.ndarray) -> np.ndarray:
    n = x.shape[-1] // 2
    re = 0.5 * (x[:n, :n] + x[n:, n:])
    im = 0.5 * (x[n:, :n] - x[:n, n:])
    return re + 1j * im


@dataclass
class _Group:
    """Stack of real symmetric blocks sharing one order ``n``."""

    names: list[str]
    n: int
    A: np.ndarray  # (m, k, n, n)
    C: np.ndarray  # (k, n, n)

    @property
    def k(self) -> int:
        return len(self.names)


@dataclass
class _Compiled:
    groups: list[_Group]
    A_lp: np.ndarray  # (m, p)
    c_lp: np.ndarray
    b: np.ndarray
    row_scale: np.ndarray
    sign: np.ndarray  # +1 for >= and ==, -1 for <=
    n_user_scalars: int
    nu: float


def _compile(p: SdpProblem) -> _Compiled:
    m = len(p.constraints)
    dims = p.block_dims()
    by_order: dict[int, list[str]] = {}
    for name, n in p.blocks:
        by_order.setdefault(2 * int(n), []).append(name)

    n_ineq = sum(c.sense != "==" for c in p.constraints)
    ns = len(p.scalars)
    A_lp = np.zeros((m, ns + n_ineq))
    c_lp = np.zeros(ns + n_ineq)
    sidx = {s: i for i, s in enumerate(p.scalars)}
    for s, coef in p.objective.items():
        if s in sidx:
            c_lp[sidx[s]] = float(coef)
    b = np.array([float(c.rhs) for c in p.constraints])
    sign = np.ones(m)
    slack = ns
    for j, con in enumerate(p.constraints):
        for s, coef in con.scalars.items():
            A_lp[j, sidx[s]] += float(coef)
        if con.sense == ">=":
            A_lp[j, slack] = -1.0
            slack += 1
        elif con.sense == "<=":
            A_lp[j, slack] = 1.0
            sign[j] = -1.0
            slack += 1

    groups = []
    for n2, names in by_order.items():
        k = len(names)
        A = np.zeros((m, k, n2, n2))
        C = np.zeros((k, n2, n2))
        for t, name in enumerate(names):
            cost = p.objective.get(name, 0.0)
            if np.ndim(cost) == 0:
                C[t] = float(cost) * _embed(np.eye(dims[name]))
            else:
                C[t] = _embed(as_hermitian(cost))
            for j, con in enumerate(p.constraints):
                if name in con.blocks:
                    A[j, t] = _embed(as_hermitian(con.blocks[name]))
        groups.append(_Group(names, n2, A, C))

    sq = (A_lp**2).sum(axis=1)
    for g in groups:
        sq += (g.A**2).sum(axis=(1, 2, 3))
    scale = np.sqrt(sq)
    scale[scale == 0] = 1.0
    A_lp /= scale[:, None]
    b = b / scale
    for g in groups:
        g.A /= scale[:, None, None, None]

    nu = float(sum(g.k * g.n for g in groups) + A_lp.shape[1])
    return _Compiled(groups, A_lp, c_lp, b, scale, sign, ns, nu)


# --------------------------------------------------------------------------
# interior-point kernel


def _sym(x):
    return 0.5 * (x + np.swapaxes(x, -1, -2))


def _A(cp: _Compiled, Xs, x) -> np.ndarray:
    out = cp.A_lp @ x
    for g, X in zip(cp.groups, Xs):
        out = out + g.A.reshape(len(out), -1) @ X.reshape(-1)
    return out


def _AT(cp: _Compiled, y):
    blocks = [(y @ g.A.reshape(len(y), -1)).reshape(g.k, g.n, g.n) for g in cp.groups]
    return blocks, cp.A_lp.T @ y


def _inner(Xs, Ss, x, s) -> float:
    return float(sum(np.vdot(X, S) for X, S in zip(Xs, Ss)) + x @ s)


def _max_step(Xs, dXs, x, dx) -> float:
    """Largest alpha keeping every X + alpha dX PSD and x + alpha dx >= 0."""
    alpha = np.inf
    neg = dx < 0
    if np.any(neg):
        alpha = min(alpha, float(np.min(-x[neg] / dx[neg])))
    for X, dX in zip(Xs, dXs):
        L = np.linalg.cholesky(X)
        Linv = np.linalg.inv(L)
        M = Linv @ dX @ np.swapaxes(Linv, -1, -2)
        lo = float(np.linalg.eigvalsh(_sym(M)).min())
        if lo < 0:
            alpha = min(alpha, -1.0 / lo)
    return alpha


def _run(cp: _Compiled, opts: SolverOptions):
    m = len(cp.b)
    groups = cp.groups
    normb = 1.0 + np.linalg.norm(cp.b)
    normC = 1.0 + np.sqrt(sum(np.sum(g.C**2) for g in groups) + cp.c_lp @ cp.c_lp)

    # scaled-identity start
    xi = max(10.0, np.sqrt(cp.nu), float(np.max(np.abs(cp.b), initial=0.0)) * np.sqrt(cp.nu))
    eta = max(10.0, np.sqrt(cp.nu), normC)
    Xs = [xi * np.broadcast_to(np.eye(g.n), (g.k, g.n, g.n)).copy() for g in groups]
    Ss = [eta * np.broadcast_to(np.eye(g.n), (g.k, g.n, g.n)).copy() for g in groups]
    x = np.full(cp.A_lp.shape[1], xi)
    s = np.full(cp.A_lp.shape[1], eta)
    y = np.zeros(m)

    history: list[IterateInfo] = []
    status = None
    best = None
    stalls = 0
    for it in range(opts.max_iter + 1):
        ATy, ATy_lp = _AT(cp, y)
        rp = cp.b - _A(cp, Xs, x)
        Rd = [g.C - a - S for g, a, S in zip(groups, ATy, Ss)]
        rd = cp.c_lp - ATy_lp - s
        if it and np.sqrt(sum(np.sum(R**2) for R in Rd) + rd @ rd) <= 1e-6 * normC:
            # nearly dual feasible: snap the dual slack onto C - A^T y when it
            # stays interior, which removes accumulated round-off
            S_exact = [g.C - a for g, a in zip(groups, ATy)]
            s_exact = cp.c_lp - ATy_lp
            try:
                for S in S_exact:
                    np.linalg.cholesky(S)
                if np.all(s_exact > 0):
                    Ss, s = S_exact, s_exact
                    Rd = [np.zeros_like(S) for S in Ss]
                    rd = np.zeros_like(s)
            except np.linalg.LinAlgError:
                pass
        pobj = float(sum(np.vdot(g.C, X) for g, X in zip(groups, Xs)) + cp.c_lp @ x)
        dobj = float(cp.b @ y)
        gap = _inner(Xs, Ss, x, s)
        mu = gap / cp.nu
        pinf = float(np.linalg.norm(rp)) / normb
        dinf = float(np.sqrt(sum(np.sum(R**2) for R in Rd) + rd @ rd)) / normC
        rel_gap = max(abs(pobj - dobj), gap) / (1.0 + abs(pobj) + abs(dobj))
        history.append(IterateInfo(it, pobj, dobj, pinf, dinf, mu))
        if pinf <= opts.feas_tol and dinf <= opts.feas_tol:
            if best is None or rel_gap < best[0]:
                best = (rel_gap, it, [X.copy() for X in Xs], x.copy(), y.copy(),
                        [S.copy() for S in Ss], s.copy(), (pobj, dobj, pinf, dinf, rel_gap))
            if rel_gap <= opts.gap_tol:
                status = Status.OPTIMAL
                break
        # primal infeasibility: y is an improving dual ray
        if dobj > 0:
            ray = np.sqrt(
                sum(np.sum((a + S) ** 2) for a, S in zip(ATy, Ss)) + np.sum((ATy_lp + s) ** 2)
            )
            if ray / dobj <= opts.infeas_tol:
                status = Status.INFEASIBLE
                break
        # dual infeasibility: X is an improving primal ray
        if pobj < 0:
            ray = np.linalg.norm(_A(cp, Xs, x)) / -pobj
            if ray <= opts.infeas_tol:
                status = Status.UNBOUNDED
                break
        if it == opts.max_iter:
            break
        try:
            step = _step(cp, opts, Xs, x, y, Ss, s, rp, Rd, rd, mu)
        except (np.linalg.LinAlgError, ValueError):
            break
        if step is None:
            stalls += 1
            if stalls >= 3:
                break
            continue
        Xs, x, y, Ss, s, moved = step
        stalls = stalls + 1 if not moved else 0
        if stalls >= 3:
            break

    current = (it, Xs, x, y, Ss, s, (pobj, dobj, pinf, dinf, rel_gap))
    if status is None:
        if best is not None and best[0] <= opts.accept_gap_tol:
            status = Status.OPTIMAL
            current = best[1:]
        else:
            status = Status.NUMERICAL_FAILURE
    elif status is Status.OPTIMAL:
        current = best[1:]
    return status, current, history


def _step(cp, opts, Xs, x, y, Ss, s, rp, Rd, rd, mu):
    """One Mehrotra predictor-corrector step with HKM directions."""
    m = len(cp.b)
    groups = cp.groups
    Gs = [np.linalg.inv(S) for S in Ss]
    M = cp.A_lp @ ((x / s)[:, None] * cp.A_lp.T)
    for g, X, G in zip(groups, Xs, Gs):
        P = X[None] @ g.A @ G[None]  # (m, k, n, n)
        M += g.A.reshape(m, -1) @ np.swapaxes(P, -1, -2).reshape(m, -1).T
    M = 0.5 * (M + M.T)
    try:
        cho = scipy.linalg.cho_factor(M, check_finite=False)
    except np.linalg.LinAlgError:
        M += (1e-14 * np.trace(M) / m + 1e-300) * np.eye(m)
        cho = scipy.linalg.cho_factor(M, check_finite=False)

    XRG = [X @ R @ G for X, R, G in zip(Xs, Rd, Gs)]

    def direction(smu, corr, corr_lp):
        R = [smu * G - X - xrg - c for G, X, xrg, c in zip(Gs, Xs, XRG, corr)]
        r_lp = smu / s - x - x * rd / s - corr_lp
        rhs = rp - _A(cp, R, r_lp)

        def expand(dy):
            dATy, dATy_lp = _AT(cp, dy)
            dS = [Rdb - a for Rdb, a in zip(Rd, dATy)]
            ds = rd - dATy_lp
            dX = [_sym(smu * G - X - X @ d @ G - c) for G, X, d, c in zip(Gs, Xs, dS, corr)]
            dx = smu / s - x - x * ds / s - corr_lp
            return dX, dx, dy, dS, ds

        # refine against the primal residual the step actually produces; the
        # Schur matrix loses accuracy as mu -> 0, so keep a correction only
        # when it helps
        out = expand(scipy.linalg.cho_solve(cho, rhs, check_finite=False))
        res = rp - _A(cp, out[0], out[1])
        for _ in range(3):
            dy = out[2] + scipy.linalg.cho_solve(cho, res, check_finite=False)
            cand = expand(dy)
            cres = rp - _A(cp, cand[0], cand[1])
            if np.linalg.norm(cres) >= 0.5 * np.linalg.norm(res):
                break
            out, res = cand, cres
        dX, dx, dy, dS, ds = out
        return dX, dx, dy, dS, ds

    zero = [0.0] * len(groups)
    dX, dx, dy, dS, ds = direction(0.0, zero, 0.0)
    ap = min(1.0, _max_step(Xs, dX, x, dx))
    ad = min(1.0, _max_step(Ss, dS, s, ds))
    mu_aff = _inner(
        [X + ap * d for X, d in zip(Xs, dX)],
        [S + ad * d for S, d in zip(Ss, dS)],
        x + ap * dx,
        s + ad * ds,
    ) / cp.nu
    sigma = min(1.0, (mu_aff / mu) ** 3) if mu > 0 else 0.0
    corr = [a @ b @ G for a, b, G in zip(dX, dS, Gs)]
    corr_lp = dx * ds / s
    dX, dx, dy, dS, ds = direction(sigma * mu, corr, corr_lp)
    ap = min(1.0, opts.step_fraction * _max_step(Xs, dX, x, dx))
    ad = min(1.0, opts.step_fraction * _max_step(Ss, dS, s, ds))
    if not (np.isfinite(ap) and np.isfinite(ad)):
        return None
    Xs = [X + ap * d for X, d in zip(Xs, dX)]
    Ss = [S + ad * d for S, d in zip(Ss, dS)]
    # the next iteration needs strictly positive definite iterates
    for X in Xs + Ss:
        np.linalg.cholesky(X)
    return Xs, x + ap * dx, y + ad * dy, Ss, s + ad * ds, max(ap, ad) >= 1e-8


def solve(p: SdpProblem, options: SolverOptions | None = None) -> SdpSolution:
    """Solve ``p``; never raises for numerical trouble, reports it in ``status``."""
    opts = options or SolverOptions()
    p.validate()
    cp = _compile(p)
    status, (iters, Xs, x, y, Ss, s, info), history = _run(cp, opts)

    blocks, dual_blocks = {}, {}
    for g, X, S in zip(cp.groups, Xs, Ss):
        for t, name in enumerate(g.names):
            blocks[name] = _unembed(X[t])
            dual_blocks[name] = 2.0 * _unembed(S[t])
    scalars = {name: float(x[i]) for i, name in enumerate(p.scalars)}
    y_orig = y / cp.row_scale
    duals = {c.name: float(sg * v) for c, sg, v in zip(p.constraints, cp.sign, y_orig)}
    pobj, dobj, pinf, dinf, rel_gap = info
    return SdpSolution(
        status=status,
        blocks=blocks,
        scalars=scalars,
        objective_value=pobj,
        dual_objective=dobj,
        duals=duals,
        dual_blocks=dual_blocks,
        gap=rel_gap,
        primal_infeasibility=pinf,
        dual_infeasibility=dinf,
        iterations=iters,
        history=history,
    )


# --------------------------------------------------------------------------
# audit


@dataclass
class ResidualReport:
    """Primal residuals recomputed from solution values.

    ``residuals[name]`` is the constraint violation divided by
    ``max(1, |rhs|)`` (zero when satisfied); ``complementarity[name]`` is
    ``|dual * slack|`` for inequality rows.
    """

    values: dict[str, float]
    residuals: dict[str, float]
    slacks: dict[str, float]
    complementarity: dict[str, float]
    min_block_eig: dict[str, float]
    min_scalar: float

    @property
    def max_residual(self) -> float:
        return max(self.residuals.values(), default=0.0)

    @property
    def max_complementarity(self) -> float:
        return max(self.complementarity.values(), default=0.0)


def constraint_value(con: Constraint, blocks: Mapping[str, np.ndarray], scalars: Mapping[str, float]) -> float:
    v = 0.0
    for b, a in con.blocks.items():
        v += float(np.real(np.sum(np.asarray(a) * np.asarray(blocks[b]).T)))
    for name, a in con.scalars.items():
        v += a * scalars[name]
    return v


def residual_report(p: SdpProblem, s: SdpSolution) -> ResidualReport:
    values, residuals, slacks, comp = {}, {}, {}, {}
    for con in p.constraints:
        v = constraint_value(con, s.blocks, s.scalars)
        values[con.name] = v
        if con.sense == ">=":
            slack = v - con.rhs
        elif con.sense == "<=":
            slack = con.rhs - v
        else:
            slack = -abs(v - con.rhs)
        slacks[con.name] = slack
        residuals[con.name] = max(0.0, -slack) / max(1.0, abs(con.rhs))
        if con.sense != "==":
            comp[con.name] = abs(s.duals.get(con.name, 0.0) * slack)
    min_eig = {
        b: float(np.linalg.eigvalsh(as_hermitian(X)).min()) for b, X in s.blocks.items()
    }
    min_scalar = min(s.scalars.values(), default=0.0)
    return ResidualReport(values, residuals, slacks, comp, min_eig, min_scalar)


# --------------------------------------------------------------------------
# plain-text dump
#
#   sdp-dump 1
#   block <name> <order>
#   scalar <name>
#   objective <var> <i> <j> <re> <im>      (block entry, i <= j, 0-based)
#   objective <var> <coef>                 (scalar cost or block trace weight)
#   constraint <name> <sense> <rhs>
#   term <var> <i> <j> <re> <im>           (belongs to the last constraint)
#   term <var> <coef>


def _fmt(v: float) -> str:
    return repr(float(v))


def _matrix_lines(prefix: str, var: str, a: np.ndarray):
    a = np.asarray(a, dtype=complex)
    for i, j in zip(*np.triu_indices(a.shape[0])):
        z = a[i, j]
        if z != 0:
            yield f"{prefix} {var} {i} {j} {_fmt(z.real)} {_fmt(z.imag)}"


def dump_problem(p: SdpProblem, out=None) -> str:
    """Write ``p`` in the plain-text format above; returns the text."""
    lines = ["sdp-dump 1"]
    if p.tag:
        lines.append(f"tag {p.tag}")
    lines += [f"block {name} {n}" for name, n in p.blocks]
    lines += [f"scalar {name}" for name in p.scalars]
    for var, cost in p.objective.items():
        if np.ndim(cost) == 0:
            lines.append(f"objective {var} {_fmt(cost)}")
        else:
            lines.extend(_matrix_lines("objective", var, cost))
    for con in p.constraints:
        lines.append(f"constraint {con.name} {con.sense} {_fmt(con.rhs)}")
        for var, a in con.blocks.items():
            lines.extend(_matrix_lines("term", var, a))
        for var, a in con.scalars.items():
            lines.append(f"term {var} {_fmt(a)}")
    text = "\n".join(lines) + "\n"
    if out is not None:
        if isinstance(out, io.TextIOBase):
            out.write(text)
        else:
            with open(out, "w") as fh:
                fh.write(text)
    return text


def load_problem(text: str) -> SdpProblem:
    """Inverse of :func:`dump_problem`."""
    lines = [ln.split() for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != ["sdp-dump", "1"]:
        raise ValueError("not an sdp-dump v1 document")
    blocks: list[tuple[str, int]] = []
    scalars: list[str] = []
    objective: dict[str, object] = {}
    constraints: list[Constraint] = []
    tag = None
    dims: dict[str, int] = {}

    def put(target: dict, var: str, fields: list[str]):
        if len(fields) == 1:
            target[var] = float(fields[0])
            return
        i, j = int(fields[0]), int(fields[1])
        z = complex(float(fields[2]), float(fields[3]))
        mat = target.get(var)
        if mat is None or np.ndim(mat) == 0:
            mat = np.zeros((dims[var], dims[var]), dtype=complex)
            target[var] = mat
        mat[i, j] = z
        mat[j, i] = np.conj(z)

    for fields in lines[1:]:
        key = fields[0]
        if key == "tag":
            tag = fields[1]
        elif key == "block":
            blocks.append((fields[1], int(fields[2])))
            dims[fields[1]] = int(fields[2])
        elif key == "scalar":
            scalars.append(fields[1])
        elif key == "objective":
            put(objective, fields[1], fields[2:])
        elif key == "constraint":
            constraints.append(Constraint(fields[1], fields[2], float(fields[3])))
        elif key == "term":
            con = constraints[-1]
            var = fields[1]
            put(con.scalars if var in scalars else con.blocks, var, fields[2:])
        else:
            raise ValueError(f"unknown record {key!r}")
    return SdpProblem(blocks, scalars, objective, constraints, tag)
