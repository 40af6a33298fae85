"""Integrability solvers for HS-derivations modulo an ideal.

Extending a logarithmic HS-derivation D of length m-1 by one step means
choosing E_m(x_j) = c_j so that [mu^m] phi_E(h) lies in I for every generator
h. Since phi_E(h) = phi_D(h) + sum_j dh/dx_j * c_j mu^m + O(mu^{m+1}), that is
a linear condition on the c_j, solved over the coefficient field after
normal-form reduction.

When that fails, earlier stages s..m-1 (with 2s >= m) are re-opened jointly
with stage m. Their perturbations P enter stage r through the Taylor
expansion h(X + P) = sum_beta Delta^beta h(X) P^beta (Delta = Hasse
derivatives). With 2s >= m only |beta| <= 2 terms survive, and the quadratic
ones are additive exactly when they are p-th powers (p = 2, beta = 2 e_j).
The unknowns then range over the F_p-span of bounded monomials and the
system is F_p-linear.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, field, replace

from .coeffs import (
    FpEliminator,
    LinearSystem,
    MPoly,
    PolyRing,
    Solution,
    exact_div,
    fp_column_solve,
    gauss_solve,
    grlex_key,
    poly_gcd,
)
from .hs import HSDerivation, eval_phi, pad, truncate
from .logideal import IdealPresentation, NotLogarithmicError, is_r_log, log_defects


class NonAdditiveError(ValueError):
    """An unknown enters an equation other than through p^e-th powers."""


class BoundExhaustedError(RuntimeError):
    """A search that is known to succeed for large enough bounds did not."""

    code = "bound_exhausted"


# -- bounds ---------------------------------------------------------------

@dataclass(frozen=True)
class Bounds:
    """Ansatz bounds. ``None`` means: use the default for the ideal at hand."""

    ring_degree: int | None = None
    param_degree: int | None = None
    depth: int = 1

    def resolve(self, ideal: IdealPresentation) -> "Bounds":
        rd = self.ring_degree
        if rd is None:
            rd = max(ideal.max_generator_degree(), 4)
        pd = self.param_degree
        if pd is None:
            pd = 2 * max_param_degree(ideal.gens)
        return Bounds(rd, pd, self.depth)

    @classmethod
    def from_env(cls, var: str = "HS_DEFAULT_BOUNDS") -> "Bounds":
        """Parse e.g. ``ring=6,param=2,depth=1``."""
        text = os.environ.get(var, "").strip()
        if not text:
            return cls()
        return cls.parse(text)

    @classmethod
    def parse(cls, text: str) -> "Bounds":
        vals = {}
        for part in text.split(","):
            if not part.strip():
                continue
            key, _, val = part.partition("=")
            key = key.strip()
            if key not in ("ring", "param", "depth"):
                raise ValueError(f"unknown bound {key!r}")
            vals[key] = int(val)
        return cls(vals.get("ring"), vals.get("param"), vals.get("depth", 1))

    def to_dict(self):
        return {"ring_degree": self.ring_degree, "param_degree": self.param_degree, "depth": self.depth}


def max_param_degree(polys) -> int:
    best = 0
    for f in polys:
        if f.ring.field.is_prime:
            continue
        for c in f.terms.values():
            best = max(best, c.num.total_degree(), c.den.total_degree())
    return best


def param_monomials(ring: PolyRing, degree: int):
    K = ring.field
    if K.is_prime:
        return [()]
    return K.pring.monomials_up_to(degree)


# -- additive (Frobenius-linear) systems ---------------------------------

@dataclass(frozen=True)
class AdditiveUnknown:
    """An unknown polynomial ranging over the F_p-span of param * ring monomials."""

    name: object
    ring_monomials: tuple
    param_monomials: tuple = ((),)


@dataclass(frozen=True)
class AdditiveEquation:
    """constant + sum coeff * X^(p^e) == 0 (modulo the ideal, if any)."""

    constant: MPoly
    terms: tuple  # of (coeff: MPoly, unknown name, e: int)


@dataclass
class FrobeniusSolution:
    ring: PolyRing
    columns: list
    solution: Solution
    p: int
    ncoords: int
    column_data: list = field(repr=False, default_factory=list)
    rhs_data: dict = field(repr=False, default_factory=dict)

    @property
    def feasible(self) -> bool:
        return self.solution.feasible

    @property
    def particular(self):
        return self.solution.particular

    @property
    def kernel(self):
        return self.solution.kernel

    def assignment(self, vec) -> dict:
        """Unknown name -> polynomial for an F_p coefficient vector."""
        ring = self.ring
        K = ring.field
        out = {}
        for a, (name, xi, pi) in zip(vec, self.columns):
            if a % self.p == 0:
                continue
            c = K(a) if K.is_prime else K(K.pring.monomial(pi, a))
            term = ring.monomial(xi, c)
            out[name] = out.get(name, ring.zero()) + term
        return out

    def recheck(self) -> bool:
        """Re-eliminate the stored system row-wise and compare ranks."""
        return recheck_rank(self.column_data, self.rhs_data, self.p, self.solution)


def recheck_rank(columns, rhs, p, solution: Solution) -> bool:
    rows = {}
    for j, col in enumerate(columns):
        for c, v in col.items():
            rows.setdefault(c, {})[j] = v
    el = FpEliminator(p, len(columns))
    for c, row in rows.items():
        el.add_row(row, rhs.get(c, 0))
    for c, v in rhs.items():
        if c not in rows:
            el.add_row({}, v)
    aug = el.rank + (1 if el.inconsistent else 0)
    return el.rank == solution.rank and aug == solution.augmented_rank


def _lcm_den(dens):
    L = None
    for d in dens:
        if L is None:
            L = d
            continue
        if d.is_constant() or d == L:
            continue
        if len(L) == 1 and len(d) == 1:
            (a, _), (b, _) = next(iter(L.terms.items())), next(iter(d.terms.items()))
            L = L.ring.monomial(tuple(max(x, y) for x, y in zip(a, b)))
            continue
        g = poly_gcd(L, d)
        L = L * exact_div(d, g)
    return L


def _coords(values, K):
    """Clear denominators jointly and expand over F_p.

    values: list of MPoly over K. Returns a list of {(ring mono, param mono): int}.
    A common nonzero scalar factor does not change the solution set of a
    homogeneous-in-the-equation condition, so each equation is scaled once.
    """
    if K.is_prime:
        return [{(m, ()): c for m, c in v.terms.items()} for v in values]
    dens = {c.den for v in values for c in v.terms.values()}
    L = _lcm_den(dens) if dens else None
    cache = {}
    out = []
    for v in values:
        d = {}
        for m, c in v.terms.items():
            mult = cache.get(c.den)
            if mult is None:
                mult = cache[c.den] = exact_div(L, c.den)
            for pm, a in (c.num * mult).terms.items():
                d[(m, pm)] = a
        out.append(d)
    return out


def frobenius_linear_solve(ring: PolyRing, equations, unknowns, ideal: IdealPresentation | None = None) -> FrobeniusSolution:
    """Solve an additive system over F_p within the unknowns' monomial bounds.

    ``unknowns`` is a list of AdditiveUnknown; every equation term refers to
    one of them by name with a Frobenius exponent e (e = 0 for a linear
    occurrence). Equations hold modulo ``ideal`` when one is given, which
    eliminates the ideal multiplier without bounding it.
    """
    K = ring.field
    p = ring.p
    by_name = {u.name: u for u in unknowns}
    columns = []
    col_index = {}
    for u in unknowns:
        for xi in u.ring_monomials:
            for pi in u.param_monomials:
                col_index[(u.name, xi, pi)] = len(columns)
                columns.append((u.name, xi, pi))
    reduce = ideal.reduce if ideal is not None else (lambda f: f)
    col_data = [dict() for _ in columns]
    rhs = {}
    for ei, eq in enumerate(equations):
        if eq.constant.ring != ring:
            raise ValueError("equation ring mismatch")
        values = [reduce(eq.constant)]
        keys = []
        for ti, (coef, name, e) in enumerate(eq.terms):
            if name not in by_name:
                raise ValueError(f"unknown {name!r} is not declared")
            if e < 0:
                raise NonAdditiveError("negative Frobenius exponent")
            q = p ** e
            for xi in by_name[name].ring_monomials:
                values.append(reduce(coef.mul_term(tuple(q * k for k in xi), K.one)))
                keys.append((name, xi, q))
        coords = _coords(values, K)
        for (m, pm), a in coords[0].items():
            rhs[(ei, m, pm)] = (-a) % p
        for (name, xi, q), cd in zip(keys, coords[1:]):
            if not cd:
                continue
            for pi in by_name[name].param_monomials:
                col = col_data[col_index[(name, xi, pi)]]
                shift = tuple(q * k for k in pi)
                for (m, pm), a in cd.items():
                    key = (ei, m, tuple(x + y for x, y in zip(pm, shift)) if pi else pm)
                    nv = (col.get(key, 0) + a) % p
                    if nv:
                        col[key] = nv
                    else:
                        col.pop(key, None)
    sol = fp_column_solve(col_data, rhs, p)
    ncoords = len({c for col in col_data for c in col} | set(rhs))
    return FrobeniusSolution(ring, columns, sol, p, ncoords, col_data, rhs)


def additive_equation(expr: MPoly, unknown_vars, ring: PolyRing) -> AdditiveEquation:
    """Split a polynomial in ring variables plus unknown symbols into an
    AdditiveEquation; the unknown symbols are the last variables of
    ``expr.ring``. Raises NonAdditiveError on mixed or non-p-power occurrences."""
    src = expr.ring
    nb = ring.nvars
    if src.names[:nb] != ring.names or src.field != ring.field:
        raise ValueError("expression ring must extend the target ring by the unknowns")
    p = ring.p
    constant = {}
    terms = {}
    for m, c in expr.terms.items():
        base, unk = m[:nb], m[nb:]
        nz = [(i, k) for i, k in enumerate(unk) if k]
        if not nz:
            constant[base] = c
            continue
        if len(nz) > 1:
            raise NonAdditiveError("product of distinct unknowns")
        i, k = nz[0]
        e = 0
        while k % p == 0:
            k //= p
            e += 1
        if k != 1:
            raise NonAdditiveError(f"unknown {unknown_vars[i]} occurs to a non-p-power exponent")
        terms.setdefault((unknown_vars[i], e), {})[base] = c
    eq_terms = tuple(
        (MPoly(ring, d), name, e) for (name, e), d in sorted(terms.items(), key=lambda t: (str(t[0][0]), t[0][1]))
    )
    return AdditiveEquation(MPoly(ring, constant), eq_terms)


# -- extension problems ----------------------------------------------------

@dataclass
class ExtensionProblem:
    """Extend a length m-1 logarithmic D to length m = ``stage``.

    ``top_target`` optionally prescribes [mu^m] phi_E(h) modulo I, one value
    per generator, instead of zero.
    """

    D: HSDerivation
    ideal: IdealPresentation
    stage: int
    bounds: Bounds = Bounds()
    top_target: tuple | None = None

    def __post_init__(self):
        if self.D.ring != self.ideal.ring:
            raise ValueError("ring mismatch")
        if self.stage != self.D.length + 1:
            raise ValueError(f"stage {self.stage} does not follow length {self.D.length}")
        if self.top_target is not None and len(self.top_target) != len(self.ideal.gens):
            raise ValueError("one target per generator required")
        if not is_r_log(self.D, self.ideal):
            raise NotLogarithmicError("current derivation is not logarithmic")


@dataclass
class Attempt:
    """One system tried during a step: its kind, size and rank data."""

    stage: int
    kind: str
    reopened_from: int
    rows: int
    cols: int
    rank: int
    augmented_rank: int
    feasible: bool
    note: str = ""
    system: object = field(default=None, repr=False)

    def to_dict(self):
        return {
            "stage": self.stage,
            "kind": self.kind,
            "reopened_from": self.reopened_from,
            "rows": self.rows,
            "cols": self.cols,
            "rank": self.rank,
            "augmented_rank": self.augmented_rank,
            "feasible": self.feasible,
            "note": self.note,
        }

    def recheck(self) -> bool:
        if self.system is None:
            return True
        if isinstance(self.system, LinearSystem):
            sol = gauss_solve(self.system)
            return sol.rank == self.rank and sol.augmented_rank == self.augmented_rank
        return self.system.recheck()


@dataclass
class ObstructionReport:
    stage: int
    status: str  # "feasible" | "infeasible" | "inconclusive"
    witness: HSDerivation | None
    bounds: Bounds
    branch: str = "linear"
    vanishing_gradient: bool = False
    attempts: list = field(default_factory=list)

    @property
    def feasible(self) -> bool:
        return self.status == "feasible"

    @property
    def bounded(self) -> bool:
        """Infeasibility is only ever relative to the ansatz bounds."""
        return self.status != "feasible"

    def recheck(self) -> bool:
        return all(a.recheck() for a in self.attempts)

    def to_dict(self):
        from .textio import format_derivation

        return {
            "stage": self.stage,
            "status": self.status,
            "feasible": self.feasible,
            "bounded": self.bounded,
            "branch": self.branch,
            "vanishing_gradient": self.vanishing_gradient,
            "bounds": self.bounds.to_dict(),
            "witness": format_derivation(self.witness) if self.witness is not None else None,
            "systems": [a.to_dict() for a in self.attempts],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)


def pad_integral(D: HSDerivation, n: int) -> HSDerivation:
    """Any HS-derivation of a polynomial ring extends by zero components."""
    if n <= D.length:
        raise ValueError(f"target length {n} must exceed {D.length}")
    return pad(D, n)


def vanishing_gradient(ideal: IdealPresentation) -> bool:
    ring = ideal.ring
    return all(
        ideal.reduce(h.partial(j)).is_zero() for h in ideal.gens for j in range(ring.n_ring)
    )


def _with_stage_values(D: HSDerivation, m: int, updates) -> HSDerivation:
    """pad(D, m) with updates[(r, j)] added to D_r(x_j)."""
    ring = D.ring
    comps = []
    for j in range(ring.n_ring):
        c = [D.images[j].coeffs[i] if i <= D.length else ring.zero() for i in range(1, m + 1)]
        for (r, jj), v in updates.items():
            if jj == j:
                c[r - 1] = c[r - 1] + v
        comps.append(c)
    return HSDerivation.from_components(ring, m, comps)


def stage_system(Dp: HSDerivation, I: IdealPresentation, m: int, ring_degree: int, top_target=None):
    """Linear conditions on the mu^m coefficients c_j = sum_xi c_{j,xi} xi.

    ``Dp`` has length >= m and zero mu^m coefficients. The unknown labels
    are (j, xi); rows are normal-form coordinates of
    [mu^m] phi(h) - target + sum_j dh/dx_j c_j.
    """
    ring = Dp.ring
    K = ring.field
    monos = ring.monomials_up_to(ring_degree)
    labels = [(j, xi) for j in range(ring.n_ring) for xi in monos]
    rows, rhs = [], []
    for gi, h in enumerate(I.gens):
        known = eval_phi(Dp, h, m).coeffs[m]
        if top_target is not None:
            known = known - top_target[gi]
        known = I.reduce(known)
        grads = [h.partial(j) for j in range(ring.n_ring)]
        cols = [I.reduce(grads[j].mul_term(xi, K.one)) for j, xi in labels]
        coords = sorted({mm for f in cols + [known] for mm in f.terms}, key=grlex_key)
        for mm in coords:
            rows.append([f.coeff(mm) for f in cols])
            rhs.append(K.neg(known.coeff(mm)))
    return LinearSystem(K, rows, rhs, tuple(labels))


def stage_values(ring: PolyRing, labels, vec) -> dict:
    """{j: polynomial} from a solution vector of a stage system."""
    K = ring.field
    out = {}
    for (j, xi), a in zip(labels, vec):
        if not K.is_zero(a):
            out[j] = out.get(j, ring.zero()) + ring.monomial(xi, a)
    return out


def _linear_step(prob: ExtensionProblem, bounds: Bounds):
    D, I, m = prob.D, prob.ideal, prob.stage
    system = stage_system(pad(D, m), I, m, bounds.ring_degree, prob.top_target)
    sol = gauss_solve(system)
    attempt = Attempt(m, "linear", m, system.nrows, system.ncols, sol.rank, sol.augmented_rank,
                      sol.feasible, system=system)
    if not sol.feasible:
        return None, attempt
    upd = {(m, j): v for j, v in stage_values(D.ring, system.labels, sol.particular).items()}
    return _with_stage_values(D, m, upd), attempt


def _quadratic_terms(I: IdealPresentation):
    """Hasse second derivatives of the generators: ({beta: Delta^beta h}, ...)."""
    ring = I.ring
    n = ring.n_ring
    out = []
    for h in I.gens:
        d = {}
        for a in range(n):
            for b in range(a, n):
                beta = [0] * ring.nvars
                beta[a] += 1
                beta[b] += 1
                d[(a, b)] = h.hasse(tuple(beta))
        out.append(d)
    return out


def _window_step(prob: ExtensionProblem, bounds: Bounds, s: int):
    """Re-open stages s..m-1 together with stage m (requires 2s >= m)."""
    D, I, m = prob.D, prob.ideal, prob.stage
    ring = D.ring
    p = ring.p
    n = ring.n_ring
    Dp = pad(D, m)
    note = ""
    quad = {}
    if 2 * s == m:
        for gi, d in enumerate(_quadratic_terms(I)):
            for (a, b), g in d.items():
                if I.reduce(g).is_zero():
                    continue
                if p == 2 and a == b:
                    quad[(gi, a)] = g
                else:
                    return None, Attempt(m, "frobenius", s, 0, 0, 0, 0, False,
                                         note="non-additive quadratic term"), False
    rmonos = tuple(ring.monomials_up_to(bounds.ring_degree))
    pmonos = tuple(param_monomials(ring, bounds.param_degree))
    unknowns = [AdditiveUnknown((r, j), rmonos, pmonos) for r in range(s, m + 1) for j in range(n)]
    equations = []
    for gi, h in enumerate(I.gens):
        base = eval_phi(Dp, h)
        grads = [eval_phi(Dp, h.partial(j), m - s) for j in range(n)]
        for rp in range(s, m + 1):
            const = base.coeffs[rp]
            if rp == m and prob.top_target is not None:
                const = const - prob.top_target[gi]
            terms = []
            for r in range(s, rp + 1):
                for j in range(n):
                    g = grads[j].coeffs[rp - r]
                    if not g.is_zero():
                        terms.append((g, (r, j), 0))
            if rp == 2 * s:
                for j in range(n):
                    g = quad.get((gi, j))
                    if g is not None:
                        terms.append((g, (s, j), 1))
            equations.append(AdditiveEquation(const, tuple(terms)))
    fsol = frobenius_linear_solve(ring, equations, unknowns, I)
    sol = fsol.solution
    attempt = Attempt(m, "frobenius", s, fsol.ncoords, len(fsol.columns), sol.rank,
                      sol.augmented_rank, sol.feasible, note=note, system=fsol)
    if not sol.feasible:
        return None, attempt, True
    upd = {}
    for (r, j), poly in fsol.assignment(sol.particular).items():
        upd[(r, j)] = poly
    return _with_stage_values(D, m, upd), attempt, True


def log_extend_step(prob: ExtensionProblem) -> ObstructionReport:
    bounds = prob.bounds.resolve(prob.ideal)
    m = prob.stage
    vg = vanishing_gradient(prob.ideal)
    E, attempt = _linear_step(prob, bounds)
    attempts = [attempt]
    if E is not None:
        return ObstructionReport(m, "feasible", E, bounds, "linear", vg, attempts)
    additive_everywhere = True
    lowest = max(2, (m + 1) // 2)
    if bounds.depth >= 1:
        for s in range(m - 1, lowest - 1, -1):
            E, attempt, additive = _window_step(prob, bounds, s)
            attempts.append(attempt)
            additive_everywhere &= additive
            if E is not None:
                return ObstructionReport(m, "feasible", E, bounds, "frobenius", vg, attempts)
    # stages 2..lowest-1 were never re-opened; their choices could matter
    exhaustive = (m == 2) or (bounds.depth >= 1 and lowest == 2)
    status = "infeasible" if exhaustive and additive_everywhere else "inconclusive"
    branch = "frobenius" if len(attempts) > 1 else "linear"
    return ObstructionReport(m, status, None, bounds, branch, vg, attempts)


def verify_integral_witness(E: HSDerivation, delta: HSDerivation, I: IdealPresentation,
                            top_target=None) -> bool:
    """E_1 = delta and E is I-logarithmic (up to the top, when a top target is set)."""
    if E.ring != delta.ring or E.ring != I.ring:
        raise ValueError("ring mismatch")
    if [jet.coeffs[1] for jet in E.images] != [jet.coeffs[1] for jet in delta.images]:
        return False
    if top_target is None:
        return is_r_log(E, I, E.length)
    if not is_r_log(E, I, E.length - 1):
        return False
    for h, t in zip(I.gens, top_target):
        if not I.contains(eval_phi(E, h).coeffs[E.length] - t):
            return False
    return True


def find_log_integral(delta: HSDerivation, I: IdealPresentation, n: int,
                      bounds: Bounds = Bounds(), top_target=None) -> ObstructionReport:
    """Search an n-integral of delta in HS(log I; n), stage by stage."""
    if delta.length != 1:
        delta = truncate(delta, 1)
    if log_defects(delta, I, 1):
        raise NotLogarithmicError("derivation is not logarithmic for the ideal")
    resolved = bounds.resolve(I)
    if n == 1:
        return ObstructionReport(1, "feasible", delta, resolved)
    current = delta
    branch = "linear"
    vg = False
    attempts = []
    for m in range(2, n + 1):
        target = top_target if m == n else None
        rep = log_extend_step(ExtensionProblem(current, I, m, bounds, target))
        attempts.extend(rep.attempts)
        vg = vg or rep.vanishing_gradient
        if rep.branch == "frobenius":
            branch = "frobenius"
        if not rep.feasible:
            return replace(rep, attempts=attempts, branch=branch, vanishing_gradient=vg)
        current = rep.witness
    if not verify_integral_witness(current, delta, I, top_target):
        raise AssertionError("solver produced a witness that does not verify")
    return ObstructionReport(n, "feasible", current, resolved, branch, vg, attempts)
