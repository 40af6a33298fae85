"""Base change of HS-derivations along k -> L.

Two kinds of extension are supported: adjoining polynomial variables
(L = k[t_1..t_e]) and a Frobenius twist of a rational function field, where
each parameter s_i becomes a p^e-th power a_i^(p^e) of a fresh parameter.
The second kind is the finite stage of the perfect closure that the
counterexample harness needs.
"""
from __future__ import annotations

import json
import time
from dataclasses import dataclass, field

from .coeffs import MPoly, PolyRing, make_field, reduce_fraction
from .hs import HSDerivation, eval_phi, map_ring
from .integrate import (
    AdditiveEquation,
    AdditiveUnknown,
    Bounds,
    find_log_integral,
    frobenius_linear_solve,
    verify_integral_witness,
)
from .logideal import IdealPresentation, is_r_log


class IncompatibleExtensionError(ValueError):
    pass


@dataclass(frozen=True)
class BaseExtension:
    """An embedding of polynomial rings induced by k -> L.

    kind "polynomial": ``new_vars`` are appended as extension variables.
    kind "frobenius": ``roots`` maps each source parameter to the target
    parameter whose p^e-th power it becomes (e = ``exponent``).
    """

    kind: str
    source: PolyRing
    target: PolyRing
    roots: tuple = ()
    exponent: int = 1

    @classmethod
    def polynomial(cls, source: PolyRing, new_vars) -> "BaseExtension":
        target = PolyRing(source.field, source.ring_vars, source.ext_vars + tuple(new_vars))
        return cls("polynomial", source, target)

    @classmethod
    def frobenius_twist(cls, source: PolyRing, roots: dict, exponent: int = 1) -> "BaseExtension":
        """roots: {source parameter: new parameter name}."""
        params = source.field.params
        if set(roots) != set(params):
            raise IncompatibleExtensionError("every source parameter needs a declared root")
        new = tuple(roots[s] for s in params)
        field_ = make_field(source.p, new)
        target = PolyRing(field_, source.ring_vars, source.ext_vars)
        return cls("frobenius", source, target, tuple((s, roots[s]) for s in params), exponent)

    @property
    def degree(self) -> int:
        """p^e: the power relating source parameters to their roots."""
        return self.source.p ** self.exponent

    def embed_coeff(self, c):
        if self.kind == "polynomial":
            return c
        q = self.degree
        src = self.source.field
        tgt = self.target.field
        pring = tgt.pring

        def lift(f):
            return MPoly(pring, {tuple(k * q for k in m): a for m, a in f.terms.items()}, _clean=True)

        if src.is_prime:
            return tgt(c)
        return reduce_fraction(lift(c.num), lift(c.den), tgt)

    def embed_poly(self, f: MPoly) -> MPoly:
        if f.ring != self.source:
            raise IncompatibleExtensionError(f"{f.ring} is not the source ring {self.source}")
        if self.kind == "polynomial":
            pad = (0,) * (self.target.nvars - self.source.nvars)
            return MPoly(self.target, {m + pad: c for m, c in f.terms.items()}, _clean=True)
        return MPoly(self.target, {m: self.embed_coeff(c) for m, c in f.terms.items()})

    def embed_ideal(self, I: IdealPresentation) -> IdealPresentation:
        """The extended ideal I^e, generated by the same generators."""
        return I.extend(self.target, self.embed_poly)


def extend_hs(D: HSDerivation, ext: BaseExtension) -> HSDerivation:
    if D.ring != ext.source:
        raise IncompatibleExtensionError("derivation does not live on the source ring")
    return map_ring(D, ext.target, ext.embed_poly)


def _decompose_poly_coeffs(f: MPoly, ext: BaseExtension) -> dict:
    """f = sum_b basis_b * f_b with f_b over the source ring; returns {b: f_b}."""
    src = ext.source
    if ext.kind == "polynomial":
        ns = src.nvars
        out = {}
        for m, c in f.terms.items():
            key, rest = m[ns:], m[:ns]
            out.setdefault(key, {})[rest] = c
        return {k: MPoly(src, v, _clean=True) for k, v in out.items()}
    q = ext.degree
    sfield = src.field
    spring = sfield.pring

    def shrink(f):
        return MPoly(spring, {tuple(k // q for k in m): a for m, a in f.terms.items()}, _clean=True)

    out = {}
    for m, c in f.terms.items():
        # a q-th power denominator lies in the image of k
        num = c.num * c.den ** (q - 1)
        den = shrink(c.den ** q)
        groups = {}
        for pm, a in num.terms.items():
            groups.setdefault(tuple(k % q for k in pm), {})[tuple(k // q for k in pm)] = a
        for key, terms in groups.items():
            out.setdefault(key, {})[m] = reduce_fraction(MPoly(spring, terms, _clean=True), den, sfield)
    return {key: MPoly(src, d) for key, d in out.items()}


def basis_decompose_derivation(eps: HSDerivation, ext: BaseExtension):
    """Write a derivation over the target as sum_b basis_b * extend(delta_b).

    Returns [(b, delta_b)] sorted by b, with b a t-exponent (polynomial kind)
    or the residue exponents of the root parameters (Frobenius kind). Zero
    parts are dropped.
    """
    if eps.ring != ext.target:
        raise IncompatibleExtensionError("derivation does not live on the target ring")
    if eps.length != 1:
        raise ValueError("expected a derivation (length 1)")
    src = ext.source
    parts = {}
    for j, jet in enumerate(eps.images):
        for key, f in _decompose_poly_coeffs(jet.coeffs[1], ext).items():
            if f.is_zero():
                continue
            parts.setdefault(key, [src.zero()] * src.n_ring)[j] = f
    return [(key, HSDerivation.derivation(src, parts[key])) for key in sorted(parts)]


def basis_element(ext: BaseExtension, key) -> MPoly:
    """The basis element of L indexed by ``key``, as a constant of the target ring."""
    tgt = ext.target
    if ext.kind == "polynomial":
        return tgt.monomial((0,) * ext.source.nvars + tuple(key))
    K = tgt.field
    return tgt.const(K(K.pring.monomial(tuple(key))))


def recombine(parts, ext: BaseExtension) -> HSDerivation:
    tgt = ext.target
    vals = [tgt.zero() for _ in range(tgt.n_ring)]
    for key, delta in parts:
        b = basis_element(ext, key)
        for j, v in enumerate(delta.component(1)):
            vals[j] = vals[j] + b * ext.embed_poly(v)
    return HSDerivation.derivation(tgt, vals)


# -- the counterexample ----------------------------------------------------

@dataclass
class CounterexampleInstance:
    """k = F_2(s,t), h = x^2 + y^2 + t x^4 + s y^4 and its twist s = a^2, t = b^2."""

    k_ring: PolyRing
    h: MPoly
    ideal: IdealPresentation
    twist: BaseExtension
    H: MPoly
    twisted_ideal: IdealPresentation

    @classmethod
    def build(cls) -> "CounterexampleInstance":
        K = make_field(2, ("s", "t"))
        R = PolyRing(K, ("x", "y"))
        x, y = R.gens()
        s, t = R.const(K.param("s")), R.const(K.param("t"))
        h = x**2 + y**2 + t * x**4 + s * y**4
        ext = BaseExtension.frobenius_twist(R, {"s": "a", "t": "b"})
        RL = ext.target
        X, Y = RL.gens()
        a, b = RL.const(RL.field.param("a")), RL.const(RL.field.param("b"))
        H = X + Y + b * X**2 + a * Y**2
        return cls(R, h, IdealPresentation(R, [h]), ext, H, ext.embed_ideal(IdealPresentation(R, [h])))

    def log_generators(self):
        """Derivations generating the H-logarithmic derivations over L."""
        RL = self.twist.target
        one, zero = RL.one(), RL.zero()
        return [
            ("d_x + d_y", HSDerivation.derivation(RL, [one, one])),
            ("H d_x", HSDerivation.derivation(RL, [self.H, zero])),
        ]


def obstruction_system(inst: CounterexampleInstance, ring_degree: int = 8, param_degree: int = 4):
    """W^2 + (t+s) U^4 == 0 modulo <h>, with U, W in the bounded F_2-span."""
    R = inst.k_ring
    K = R.field
    rmonos = tuple(R.monomials_up_to(ring_degree))
    pmonos = tuple(K.pring.monomials_up_to(param_degree))
    unknowns = [AdditiveUnknown("U", rmonos, pmonos), AdditiveUnknown("W", rmonos, pmonos)]
    st = R.const(K.param("s") + K.param("t"))
    eq = AdditiveEquation(R.zero(), ((R.one(), "W", 1), (st, "U", 2)))
    return unknowns, [eq]


def k_side(inst: CounterexampleInstance, ring_degree: int = 8, param_degree: int = 4) -> dict:
    t0 = time.perf_counter()
    unknowns, eqs = obstruction_system(inst, ring_degree, param_degree)
    sol = frobenius_linear_solve(inst.k_ring, eqs, unknowns, inst.ideal)
    u_forced = True
    w_forced = True
    for vec in sol.kernel:
        assign = sol.assignment(vec)
        U = assign.get("U", inst.k_ring.zero())
        W = assign.get("W", inst.k_ring.zero())
        u_forced &= inst.ideal.contains(U)
        w_forced &= inst.ideal.contains(W)
    particular_zero = not any(sol.particular)
    dx_dy = HSDerivation.derivation(inst.k_ring, [inst.k_ring.one(), inst.k_ring.one()])
    staged = find_log_integral(dx_dy, inst.ideal, 4)
    return {
        "columns": len(sol.columns),
        "coordinates": sol.ncoords,
        "rank": sol.solution.rank,
        "kernel_dimension": len(sol.kernel),
        "every_U_in_ideal": u_forced and particular_zero,
        "every_W_in_ideal": w_forced and particular_zero,
        "recheck": sol.recheck(),
        "bounds": {"ring_degree": ring_degree, "param_degree": param_degree},
        "staged_dx_plus_dy": staged.status,
        "seconds": round(time.perf_counter() - t0, 3),
        "_solution": sol,
    }


def l_side(inst: CounterexampleInstance, bounds: Bounds = Bounds()) -> dict:
    from .textio import format_derivation

    t0 = time.perf_counter()
    HL = IdealPresentation(inst.twist.target, [inst.H])
    h_is_square = inst.twist.embed_poly(inst.h) == inst.H**2
    generators = []
    for name, delta in inst.log_generators():
        log_H = is_r_log(delta, HL, 1)
        rep = find_log_integral(delta, inst.twisted_ideal, 4, bounds)
        ok = rep.feasible and verify_integral_witness(rep.witness, delta, inst.twisted_ideal)
        generators.append({
            "name": name,
            "logarithmic_for_H": log_H,
            "status": rep.status,
            "branch": rep.branch,
            "verified": ok,
            "phi_fixes_h": ok and eval_phi(rep.witness, inst.twisted_ideal.gens[0]).coeffs[1:]
            == tuple(inst.twist.target.zero() for _ in range(4)),
            "witness": format_derivation(rep.witness) if rep.witness is not None else None,
        })
    return {
        "h_equals_H_squared": h_is_square,
        "generators": generators,
        "seconds": round(time.perf_counter() - t0, 3),
    }


def narrative_coefficients(inst: CounterexampleInstance):
    """The mu^2 and mu^4 coefficients of h(x + u1 mu + u2 mu^2, y + v1 mu + v2 mu^2)."""
    R = inst.k_ring
    S = PolyRing(R.field, R.ring_vars, ("u1", "u2", "v1", "v2"))
    emb = inst.h.embed(S, list(range(R.nvars)))
    u1, u2, v1, v2 = (S.gen(n) for n in ("u1", "u2", "v1", "v2"))
    D = HSDerivation.from_components(S, 4, [[u1, u2], [v1, v2]])
    jet = eval_phi(D, emb)
    return jet.coeffs[2], jet.coeffs[4]


@dataclass
class CounterexampleReport:
    k: dict
    l: dict
    mu2: str
    mu4: str
    bounds: dict = field(default_factory=dict)

    @property
    def not_surjective(self) -> bool:
        return (
            self.k["every_U_in_ideal"]
            and self.l["h_equals_H_squared"]
            and all(g["verified"] and g["logarithmic_for_H"] for g in self.l["generators"])
        )

    def to_dict(self):
        k = {key: v for key, v in self.k.items() if not key.startswith("_")}
        k.pop("seconds", None)
        l = dict(self.l)
        l.pop("seconds", None)
        return {
            "instance": {
                "field": "F_2(s,t)",
                "h": "x^2 + y^2 + t*x^4 + s*y^4",
                "twist": "s = a^2, t = b^2",
                "H": "x + y + b*x^2 + a*y^2",
                "h_irreducible": "assumed",
            },
            "mu2_coefficient": self.mu2,
            "mu4_coefficient": self.mu4,
            "k_side": k,
            "l_side": l,
            "phi4_not_surjective": self.not_surjective,
            "scope": "witness level, bounded search",
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    def to_text(self) -> str:
        k, l = self.k, self.l
        lines = [
            "A = F_2(s,t)[x,y]/<h>,  h = x^2 + y^2 + t*x^4 + s*y^4",
            "",
            "Generic integral: x -> x + u1 mu + u2 mu^2 + ..., y -> y + v1 mu + v2 mu^2 + ...",
            f"  [mu^2] phi(h) = {self.mu2}",
            "  so u1 = v1 =: u in the domain A.",
            f"  [mu^4] phi(h) = {self.mu4}",
            "  with w = u2 + v2 this reads w^2 + (t+s) u^4 = 0 in A, i.e.",
            "  W^2 + (t+s) U^4 = h G in F_2(s,t)[x,y].",
            "",
            f"k-side (deg_xy <= {k['bounds']['ring_degree']}, deg_st <= {k['bounds']['param_degree']}):",
            f"  {k['columns']} F_2-unknowns, rank {k['rank']}, solution space of dimension {k['kernel_dimension']}",
            f"  every solution has U in <h>: {k['every_U_in_ideal']}",
            f"  staged search for d_x + d_y up to length 4: {k['staged_dx_plus_dy']} (bounded)",
            "  => no nonzero derivation of A is 4-integrable within the bounds.",
            "",
            "L-side (L = F_2(a,b), s = a^2, t = b^2):",
            f"  h = H^2 with H = x + y + b*x^2 + a*y^2: {l['h_equals_H_squared']}",
        ]
        for g in l["generators"]:
            lines.append(
                f"  {g['name']}: H-logarithmic {g['logarithmic_for_H']}, 4-integral {g['status']} "
                f"via {g['branch']} branch, verified {g['verified']}"
            )
            if g["witness"]:
                for wl in g["witness"].splitlines()[1:]:
                    lines.append(f"      {wl}")
        lines += [
            "",
            "Conclusion: L (x) IDer_k(A;4) = 0 at bounded level while IDer_L(A_L;4) contains",
            f"nonzero verified witnesses, so Phi_4 is not surjective: {self.not_surjective}",
        ]
        return "\n".join(lines)


def counterexample_report(bounds: Bounds = Bounds(8, 4)) -> CounterexampleReport:
    inst = CounterexampleInstance.build()
    rd = 8 if bounds.ring_degree is None else bounds.ring_degree
    pd = 4 if bounds.param_degree is None else bounds.param_degree
    k = k_side(inst, rd, pd)
    l = l_side(inst)
    mu2, mu4 = narrative_coefficients(inst)
    return CounterexampleReport(k, l, str(mu2), str(mu4), {"ring_degree": rd, "param_degree": pd})


# -- leaps ---------------------------------------------------------------------

def is_prime_power_of(n: int, p: int) -> bool:
    if n < p:
        return False
    while n % p == 0:
        n //= p
    return n == 1


@dataclass
class LeapReport:
    ideal: str
    p: int
    m_max: int
    rows: list  # per witness: {"name", "statuses": {length: status}, "flag": length | None}

    @property
    def candidates(self) -> list:
        return sorted({r["flag"] for r in self.rows if r["flag"] is not None})

    @property
    def consistent(self) -> bool:
        """Every flagged length is a power of p."""
        return all(is_prime_power_of(s, self.p) for s in self.candidates)

    def to_dict(self):
        return {
            "ideal": self.ideal,
            "p": self.p,
            "m_max": self.m_max,
            "witnesses": [
                {"name": r["name"], "statuses": {str(k): v for k, v in r["statuses"].items()}, "flag": r["flag"]}
                for r in self.rows
            ],
            "candidates": self.candidates,
            "powers_of_p_only": self.consistent,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)


def leap_scan(I: IdealPresentation, m_max: int, witnesses, bounds: Bounds = Bounds()) -> LeapReport:
    """Try each witness derivation at lengths 2..m_max and flag the first
    length where a witness integrable to s-1 fails at s (bounded evidence).

    ``witnesses`` is a list of (name, derivation). Lengths after a failure
    are not attempted. Inconclusive searches and exhausted bounds are
    recorded but never flagged.
    """
    rows = []
    for name, delta in witnesses:
        statuses = {1: "feasible"}
        flag = None
        for s in range(2, m_max + 1):
            rep = find_log_integral(delta, I, s, bounds)
            statuses[s] = rep.status
            if rep.feasible:
                continue
            if rep.status == "infeasible":
                flag = s
            break
        rows.append({"name": name, "statuses": statuses, "flag": flag})
    return LeapReport(", ".join(str(g) for g in I.gens), I.ring.p, m_max, rows)


def counterexample_witness_family(inst: CounterexampleInstance, include_partials: bool = True):
    """Derivations of F_2(s,t)[x,y] used for the leap scan (all are <h>-logarithmic)."""
    R = inst.k_ring
    x, y = R.gens()
    one, zero = R.one(), R.zero()
    fam = []
    if include_partials:
        fam.append(("d_x", HSDerivation.derivation(R, [one, zero])))
        fam.append(("d_y", HSDerivation.derivation(R, [zero, one])))
    fam += [
        ("d_x + d_y", HSDerivation.derivation(R, [one, one])),
        ("x(d_x + d_y)", HSDerivation.derivation(R, [x, x])),
        ("y(d_x + d_y)", HSDerivation.derivation(R, [y, y])),
        ("zero", HSDerivation.derivation(R, [zero, zero])),
    ]
    return fam
