"""Ideals with Groebner bases, logarithmic conditions and quotient derivations."""
from __future__ import annotations

from .coeffs import MPoly, PolyRing, grlex_key
from .hs import HSDerivation, compose, eval_phi, subst_action
from .jets import JetSeries, SubstitutionMap


class NotLogarithmicError(ValueError):
    """An HS-derivation fails to preserve the ideal where it is required to."""


def _lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def _divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def normal_form(f: MPoly, basis) -> MPoly:
    """Full reduction of f by a list of monic polynomials (graded-lex)."""
    if f.is_zero() or not basis:
        return f
    ring = f.ring
    K = ring.field
    prime = K.is_prime
    p = K.p
    leads = [(g.leading_monomial(), -g) for g in basis]
    rem = dict(f.terms)
    out = {}
    while rem:
        m = max(rem, key=grlex_key)
        c = rem[m]
        for lm, neg_g in leads:
            if _divides(lm, m):
                q = tuple(a - b for a, b in zip(m, lm))
                for mm, cc in neg_g.terms.items():
                    mm = tuple(a + b for a, b in zip(mm, q))
                    v = (cc * c) % p if prime else cc * c
                    if mm in rem:
                        nv = (rem[mm] + v) % p if prime else rem[mm] + v
                        if (nv == 0) if prime else nv.is_zero():
                            del rem[mm]
                        else:
                            rem[mm] = nv
                    else:
                        rem[mm] = v
                break
        else:
            out[m] = c
            del rem[m]
    return MPoly(ring, out, _clean=True)


def _spoly(f: MPoly, g: MPoly) -> MPoly:
    lf, lg = f.leading_monomial(), g.leading_monomial()
    l = _lcm(lf, lg)
    K = f.ring.field
    a = f.mul_term(tuple(x - y for x, y in zip(l, lf)), K.inv(f.leading_coeff()))
    b = g.mul_term(tuple(x - y for x, y in zip(l, lg)), K.inv(g.leading_coeff()))
    return a - b


def buchberger(gens) -> list:
    """Reduced Groebner basis (monic, graded-lex) using the chain criterion."""
    basis = [g.monic() for g in gens if not g.is_zero()]
    if not basis:
        return []
    pairs = {(i, j) for j in range(len(basis)) for i in range(j)}
    done = set()
    while pairs:
        i, j = min(pairs, key=lambda ij: (sum(_lcm(basis[ij[0]].leading_monomial(),
                                                     basis[ij[1]].leading_monomial())), ij))
        pairs.discard((i, j))
        lij = _lcm(basis[i].leading_monomial(), basis[j].leading_monomial())
        chain = False
        for k in range(len(basis)):
            if k in (i, j):
                continue
            if _divides(basis[k].leading_monomial(), lij):
                a, b = (min(i, k), max(i, k)), (min(j, k), max(j, k))
                if a in done and b in done:
                    chain = True
                    break
        done.add((i, j))
        if chain:
            continue
        r = normal_form(_spoly(basis[i], basis[j]), basis)
        if not r.is_zero():
            basis.append(r.monic())
            n = len(basis) - 1
            pairs |= {(k, n) for k in range(n)}
    # minimize then inter-reduce
    lms = [g.leading_monomial() for g in basis]
    keep = []
    for i, g in enumerate(basis):
        if any(
            _divides(lms[k], lms[i]) and (lms[k] != lms[i] or k < i)
            for k in range(len(basis)) if k != i
        ):
            continue
        keep.append(g)
    reduced = []
    for i, g in enumerate(keep):
        others = keep[:i] + keep[i + 1:]
        lt = g.leading_monomial()
        tail = g - g.ring.monomial(lt, g.leading_coeff())
        reduced.append((g.ring.monomial(lt) + normal_form(tail, others)).monic())
    reduced.sort(key=lambda g: grlex_key(g.leading_monomial()))
    return reduced


class IdealPresentation:
    """Generators plus a cached Groebner basis."""

    def __init__(self, ring: PolyRing, gens):
        gens = tuple(gens)
        for g in gens:
            if g.ring != ring:
                raise ValueError("generator ring mismatch")
        self.ring = ring
        self.gens = gens
        self.groebner = tuple(buchberger(gens))

    def __repr__(self):
        return f"Ideal<{', '.join(map(str, self.gens))}> in {self.ring}"

    def __eq__(self, other):
        return isinstance(other, IdealPresentation) and self.ring == other.ring and self.groebner == other.groebner

    def __hash__(self):
        return hash((self.ring, self.groebner))

    def reduce(self, f: MPoly) -> MPoly:
        if f.ring != self.ring:
            raise ValueError(f"ring mismatch: {f.ring} vs {self.ring}")
        return normal_form(f, self.groebner)

    def contains(self, f: MPoly) -> bool:
        return self.reduce(f).is_zero()

    def is_zero_ideal(self) -> bool:
        return not self.groebner

    def max_generator_degree(self) -> int:
        return max((g.total_degree() for g in self.gens), default=0)

    def extend(self, ring: PolyRing, embed) -> "IdealPresentation":
        """I^e: the same generators pushed into ``ring`` by ``embed``."""
        return IdealPresentation(ring, [embed(g) for g in self.gens])


def membership(I: IdealPresentation, f: MPoly) -> bool:
    return I.contains(f)


def log_defects(D: HSDerivation, I: IdealPresentation, r: int | None = None):
    """(generator index, i, normal form of D_i(h)) for every failing pair with i <= r."""
    if D.ring != I.ring:
        raise ValueError("ring mismatch")
    r = D.length if r is None else r
    if not 0 <= r <= D.length:
        raise ValueError(f"r={r} outside 0..{D.length}")
    bad = []
    if r == 0:
        return bad
    for gi, h in enumerate(I.gens):
        jet = eval_phi(D, h, r)
        for i in range(1, r + 1):
            nf = I.reduce(jet.coeffs[i])
            if not nf.is_zero():
                bad.append((gi, i, nf))
    return bad


def is_r_log(D: HSDerivation, I: IdealPresentation, r: int | None = None) -> bool:
    """D_i(h) in I for every generator h and 1 <= i <= r."""
    return not log_defects(D, I, r)


def operator_respects_ideal(op, I: IdealPresentation, extra_degree: int = 3) -> bool:
    """Extensional check that a linear operator maps I into I: apply it to each
    generator and to its multiples by monomials up to ``extra_degree``."""
    ring = I.ring
    for h in I.gens:
        for mono in ring.monomials_up_to(extra_degree):
            if not I.contains(op(h.mul_term(mono, ring.field.one))):
                return False
    return True


class QuotientHS:
    """An HS-derivation of R/I given by normal-form representative images."""

    __slots__ = ("ideal", "rep")

    def __init__(self, ideal: IdealPresentation, rep: HSDerivation):
        if rep.ring != ideal.ring:
            raise ValueError("ring mismatch")
        if not is_r_log(rep, ideal):
            raise NotLogarithmicError("representative images do not define a derivation of R/I")
        self.ideal = ideal
        self.rep = HSDerivation(
            rep.ring,
            rep.length,
            [JetSeries(rep.ring, [jet.coeffs[0]] + [ideal.reduce(c) for c in jet.coeffs[1:]])
             for jet in rep.images],
        )

    @property
    def length(self) -> int:
        return self.rep.length

    def images_mod_ideal(self):
        """Images with every coefficient, including the constant term, reduced."""
        return [jet.map_coeffs(self.ideal.reduce) for jet in self.rep.images]

    def __eq__(self, other):
        return isinstance(other, QuotientHS) and self.ideal == other.ideal and self.rep == other.rep

    def __hash__(self):
        return hash((self.ideal, self.rep))

    def __repr__(self):
        return f"QuotientHS({self.rep!r} mod {self.ideal!r})"

    def compose(self, other: "QuotientHS") -> "QuotientHS":
        if other.ideal != self.ideal:
            raise ValueError("ideal mismatch")
        return QuotientHS(self.ideal, compose(self.rep, other.rep))

    def subst(self, psi: SubstitutionMap) -> "QuotientHS":
        """psi_B . D where psi_B is the map induced on (R/I)[mu]."""
        return QuotientHS(self.ideal, subst_action(psi, self.rep))


def pushforward_hs(D: HSDerivation, I: IdealPresentation) -> QuotientHS:
    bad = log_defects(D, I)
    if bad:
        gi, i, _ = bad[0]
        raise NotLogarithmicError(f"D_{i}({I.gens[gi]}) is not in the ideal")
    return QuotientHS(I, D)


def lift_hs_from_quotient(E: QuotientHS) -> HSDerivation:
    """The representative images themselves (zero correction)."""
    return E.rep
