"""Factorizations of HS-derivations.

decompose_char_p writes a (p^l - 1)-logarithmic D of length p^l as
T[p] o F with F fully logarithmic, following the descending induction on
the order of D. factor_over_poly_extension writes a derivation over
L[x] = k[t][x] as an ordered product of psi_alpha^{n,m} . N with
psi(mu) = t^alpha mu^n and every N defined over k[x].
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

from .basechange import BaseExtension, basis_decompose_derivation, extend_hs
from .hs import (
    INF,
    HSDerivation,
    compose,
    compose_all,
    eval_phi,
    invert,
    order,
    pad,
    residual_derivation,
    stretch,
    subst_action,
    truncate,
)
from .indexsets import c_set_max, is_power_of, n_beta, p_set_member
from .integrate import BoundExhaustedError, Bounds, find_log_integral
from .jets import SubstitutionMap
from .logideal import IdealPresentation, is_r_log


@dataclass
class Factor:
    """psi . extend(N) with psi(mu) = t^alpha mu^n, truncated to ``length``.

    ``alpha`` is None for plain stretches (no t-scaling).
    """

    n: int
    alpha: tuple | None
    derivation: HSDerivation
    length: int
    label: str = ""

    def substitution(self, ring, source: int) -> SubstitutionMap:
        a = None
        if self.alpha is not None:
            a = ring.monomial((0,) * ring.n_ring + tuple(self.alpha))
        return SubstitutionMap.monomial(ring, source, self.length, a, self.n)

    def realize(self, ext: BaseExtension | None = None) -> HSDerivation:
        N = self.derivation
        reach = -(-self.length // self.n)
        if N.length < reach:
            N = pad(N, reach)
        if ext is not None:
            N = extend_hs(N, ext)
        return subst_action(self.substitution(N.ring, N.length), N)

    def to_dict(self):
        from .textio import format_derivation

        return {
            "label": self.label,
            "n": self.n,
            "alpha": list(self.alpha) if self.alpha is not None else None,
            "length": self.length,
            "derivation": format_derivation(self.derivation),
        }


@dataclass
class FactorizationCertificate:
    kind: str
    source: HSDerivation
    factors: list
    attestations: dict = field(default_factory=dict)
    extension: BaseExtension | None = None
    extra: dict = field(default_factory=dict)

    @property
    def order(self) -> list:
        return [f.label for f in self.factors]

    def recompose(self) -> HSDerivation:
        ders = [f.realize(self.extension) for f in self.factors]
        return compose_all(ders, self.source.ring, self.source.length)

    def recomposes(self) -> bool:
        return self.recompose() == self.source

    def verify(self) -> bool:
        return self.recomposes() and all(self.attestations.values())

    def to_dict(self):
        from .textio import format_derivation

        return {
            "kind": self.kind,
            "input": format_derivation(self.source),
            "factors": [f.to_dict() for f in self.factors],
            "order": self.order,
            "attestations": dict(sorted(self.attestations.items())),
            "recomposes": self.recomposes(),
            **{k: (format_derivation(v) if isinstance(v, HSDerivation) else v) for k, v in self.extra.items()},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)


# -- char p decomposition ---------------------------------------------------

def _coefficient_degree(D: HSDerivation) -> int:
    return max((c.total_degree() for jet in D.images for c in jet.coeffs[1:] if not c.is_zero()), default=0)


def _log_integral(delta, I, n, bounds: Bounds, top_target=None, hint: int = 0, tries: int = 3):
    """find_log_integral with automatic widening of defaulted ring bounds."""
    fixed = bounds.ring_degree is not None
    resolved = bounds.resolve(I)
    rd = max(resolved.ring_degree, hint)
    last = None
    for k in range(1 if fixed else tries):
        b = Bounds(rd + 2 * k if not fixed else resolved.ring_degree, resolved.param_degree, bounds.depth)
        last = find_log_integral(delta, I, n, b, top_target)
        if last.feasible:
            return last.witness
    err = BoundExhaustedError(
        f"no logarithmic {n}-integral found within ring degree {b.ring_degree} ({last.status})"
    )
    err.report = last
    raise err


def decompose_char_p(D: HSDerivation, I: IdealPresentation, p: int, l: int,
                     bounds: Bounds = Bounds()) -> FactorizationCertificate:
    """D = T[p] o (o_{j in J(l,D)} psi^j . F^j), psi^j(mu) = mu^j, decreasing j.

    The certificate's factors are T[p] followed by the psi^j . F^j; the
    coarse factor F is their composite and is stored in ``extra``.
    """
    ring = D.ring
    if ring.p != p:
        raise ValueError(f"ring has characteristic {ring.p}, not {p}")
    if l < 1 or D.length != p**l:
        raise ValueError(f"length must be p^l = {p**l}")
    if not is_r_log(D, I, p**l - 1):
        from .logideal import NotLogarithmicError

        raise NotLogarithmicError(f"D is not ({p**l - 1})-logarithmic")
    ell = order(D)
    if ell is not INF and ell <= 1:
        raise ValueError("decomposition requires l(D) > 1")
    top = p**l
    low = p ** (l - 1)
    hint = _coefficient_degree(D)
    steps = []

    def rec(Dc):
        i = order(Dc)
        if i is INF:
            return HSDerivation.identity(ring, low), []
        if i == top:
            delta = HSDerivation.derivation(ring, Dc.component(top))
            steps.append({"order": i, "case": "base"})
            return stretch(delta, low), []
        if is_power_of(i, p):
            t = 0
            while p**t < i:
                t += 1
            delta = HSDerivation.derivation(ring, Dc.component(i))
            targets = tuple(eval_phi(Dc, h).coeffs[top] for h in I.gens)
            F = _log_integral(delta, I, p ** (l - t), bounds, targets, hint)
            Dn = compose(invert(stretch(F, i)), Dc)
            steps.append({"order": i, "case": "power of p"})
            T1, fac = rec(Dn)
            return compose(stretch(F, p ** (t - 1)), T1), fac
        s = c_set_max(p, l, i)
        n = p ** (s + 1)
        delta = HSDerivation.derivation(ring, Dc.component(i))
        F = pad(_log_integral(delta, I, n - 1, bounds, None, hint), n)
        psiF = subst_action(SubstitutionMap.monomial(ring, n, top, None, i), F)
        if i % p:
            Dn = compose(Dc, invert(psiF))
            steps.append({"order": i, "case": "coprime to p"})
            T, fac = rec(Dn)
            return T, fac + [(i, F)]
        Dn = compose(invert(psiF), Dc)
        steps.append({"order": i, "case": "multiple of p"})
        T1, fac = rec(Dn)
        return compose(truncate(stretch(F, i // p), low), T1), fac

    T, fac = rec(D)
    factors = [Factor(p, None, T, top, "T[p]")]
    factors += [Factor(j, None, Fj, top, f"psi^{j}") for j, Fj in fac]
    F = compose_all([f.realize() for f in factors[1:]], ring, top)
    attest = {
        "recomposition": compose(stretch(T, p), F) == D,
        "T_log": is_r_log(T, I, low - 1),
        "F_log": is_r_log(F, I),
        "F_order_gt_1": order(F) > 1,
        "top_relation": all(
            I.contains(eval_phi(T, h).coeffs[low] - eval_phi(D, h).coeffs[top]) for h in I.gens
        ),
        "factors_log": all(is_r_log(Fj, I, Fj.length - 1) for _, Fj in fac),
    }
    return FactorizationCertificate(
        "char_p", D, factors, attest, None,
        {"p": p, "l": l, "T": T, "F": F, "steps": steps},
    )


# -- factorization over L = k[t] -------------------------------------------

def _psi_action(n, alpha, N, k, ext):
    return Factor(n, alpha, N, k).realize(ext)


def factor_over_poly_extension(D: HSDerivation, m: int | None = None,
                               I: IdealPresentation | None = None) -> FactorizationCertificate:
    """D = o_{n=1..m} o_{alpha in L_n} psi_alpha^{n,m} . extend(N^{n,alpha}).

    D lives on a ring whose extension variables are the t_i of L = k[t].
    Blocks are composed by increasing n; inside a block, in order of
    creation. Each N^{n,alpha} is returned with length floor(m/n).
    """
    ring_L = D.ring
    if not ring_L.ext_vars:
        raise ValueError("the ring of D has no extension variables")
    m = D.length if m is None else m
    if m != D.length:
        D = truncate(D, m)
    base = ring_L.base_ring()
    ext = BaseExtension.polynomial(base, ring_L.ext_vars)
    blocks: dict = {}

    for k in range(1, m + 1):
        Dk = truncate(D, k)
        parts = [_psi_action(n, a, N, k, ext) for n in sorted(blocks) for a, N in blocks[n]]
        E = compose_all(parts, ring_L, k)
        delta = residual_derivation(Dk, E)
        old_keys = {n: {a for a, _ in blocks[n]} for n in blocks}
        for beta, d_beta in basis_decompose_derivation(delta, ext):
            done = False
            for n in sorted(old_keys):
                if n >= k or k % n:
                    continue
                r = k // n
                if any(b % r for b in beta):
                    continue
                alpha = tuple(b // r for b in beta)
                if alpha in old_keys[n]:
                    entries = blocks[n]
                    idx = next(i for i, (a, _) in enumerate(entries) if a == alpha)
                    N = entries[idx][1]
                    N = pad(N, r) if N.length < r else N
                    entries[idx] = (alpha, compose(N, stretch(d_beta, r)))
                    done = True
                    break
            if done:
                continue
            if k == 1 or not p_set_member(k, beta):
                blocks.setdefault(k, []).append((tuple(beta), d_beta))
                continue
            n = n_beta(k, beta)
            r = k // n
            alpha = tuple(b // r for b in beta)
            blocks.setdefault(n, []).append((alpha, stretch(d_beta, r)))

    factors = []
    for n in sorted(blocks):
        for alpha, N in blocks[n]:
            length = m // n
            N = pad(N, length) if N.length < length else N
            factors.append(Factor(n, alpha, N, m, f"n={n},alpha={list(alpha)}"))
    attest = {}
    if I is not None:
        Ie = ext.embed_ideal(I)
        if is_r_log(D, Ie):
            for f in factors:
                attest[f"log:{f.label}"] = is_r_log(f.derivation, I, m // f.n)
    cert = FactorizationCertificate("poly_extension", D, factors, attest, ext, {"m": m})
    if not cert.recomposes():
        raise AssertionError("factorization failed to recompose")
    return cert


def phi_preimage(delta: HSDerivation, cert: FactorizationCertificate):
    """[(alpha, N)] from the n = 1 factors: delta = sum t^alpha extend(N_1),
    each N an m-integral over the base ring."""
    if cert.kind != "poly_extension":
        raise ValueError("expected a certificate over a polynomial extension")
    d1 = truncate(delta, 1) if delta.length > 1 else delta
    if truncate(cert.source, 1) != d1:
        raise ValueError("certificate does not integrate the given derivation")
    out = [(f.alpha, f.derivation) for f in cert.factors if f.n == 1]
    ext = cert.extension
    ring = ext.target
    vals = [ring.zero() for _ in range(ring.n_ring)]
    for alpha, N in out:
        t = ring.monomial((0,) * ring.n_ring + tuple(alpha))
        for j, v in enumerate(N.component(1)):
            vals[j] = vals[j] + t * ext.embed_poly(v)
    if HSDerivation.derivation(ring, vals) != d1:
        raise AssertionError("n = 1 factors do not reproduce the derivation")
    return out
