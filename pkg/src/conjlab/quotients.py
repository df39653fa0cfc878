"""Finite quotients by index folding and exponent truncation.

Folding the generator index modulo I identifies a_i with a_{i mod I} and
makes t^I central; truncating every a/b and non-central derived exponent
modulo m and each central coordinate c_k modulo a per-index modulus M(k)
leaves a finite group. Indices of c fold as c_0 = 1 and c_{I-k} = c_k^{-1},
so the canonical c-indices are 1..I//2, with c_{I/2} forced 2-torsion when
I is even.

M(k) must divide m and every d(j) whose relator c_{2^j}^{d(j)} folds onto
index k or I-k. The residues 2^j mod I split into a pre-periodic part
(j below the 2-adic valuation of I) and a cycle hit by infinitely many j;
for cycle residues the divisibility constraint over the whole tail is
computable only from the metadata a separability function carries: a
strictly increasing d yields coprime tail values (gcd 1), an eventually
constant d yields an exact finite gcd, and anything else kills the index
outright (modulus 1), which is always a legitimate quotient.

Element layout: (a, b, nonc, c, t) where a and b are exponent tuples over
residues 0..I-1, nonc runs over the sorted folded basis AA(i<j), AB(i<=j),
BB(i<j), c runs over the canonical indices with modulus > 1, and t is the
t-exponent mod I. Tuples keep elements hashable and enumerable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product
from typing import Optional

from .conjugacy import IntegerLinearSystem, hnf_solve
from .extension import GElement
from .nilpotent import d_element


def _fold_c(I, k, coeff):
    k %= I
    if k == 0 or coeff == 0:
        return ()
    if 2 * k <= I:
        return ((("C", k), coeff),)
    return ((("C", I - k), -coeff),)


def _fold_aa(I, i, j, coeff):
    if i == j or coeff == 0:
        return ()
    if i < j:
        return ((("AA", i, j), coeff),)
    return ((("AA", j, i), -coeff),)


def _fold_bb(I, i, j, coeff):
    if i == j or coeff == 0:
        return ()
    if i < j:
        return ((("BB", i, j), coeff),)
    return ((("BB", j, i), -coeff),)


def _fold_ab(I, i, j, coeff):
    if coeff == 0:
        return ()
    if i <= j:
        return ((("AB", i, j), coeff),)
    return ((("AB", j, i), coeff),) + _fold_c(I, j - i, coeff)


def _fold_key(I, key, coeff, shift=0):
    kind = key[0]
    if kind == "C":
        return _fold_c(I, key[1], coeff)
    i, j = (key[1] + shift) % I, (key[2] + shift) % I
    if kind == "AA":
        return _fold_aa(I, i, j, coeff)
    if kind == "BB":
        return _fold_bb(I, i, j, coeff)
    return _fold_ab(I, i, j, coeff)


class FoldedQuotient:
    """Arithmetic context for index-folded elements.

    m is the a/b/non-central exponent modulus (None keeps integers).
    c_mod maps each k in 1..I//2 to its modulus; None keeps integers
    there too, apart from the forced 2-torsion at k = I/2. Indices with
    modulus 1 are dropped from element tuples entirely.
    """

    def __init__(self, I: int, m: Optional[int], c_mod: dict):
        if I < 1:
            raise ValueError("index modulus must be positive")
        if m is not None and m < 2:
            raise ValueError("exponent modulus must be at least 2")
        self.I = I
        self.m = m
        self.c_mod = {k: c_mod.get(k) for k in range(1, I // 2 + 1)}
        keys = ([("AA", i, j) for i in range(I) for j in range(i + 1, I)]
                + [("BB", i, j) for i in range(I) for j in range(i + 1, I)]
                + [("AB", i, j) for i in range(I) for j in range(i, I)])
        self.nonc_keys = tuple(sorted(keys))
        self.c_keys = tuple(("C", k) for k in range(1, I // 2 + 1)
                            if self.c_mod[k] != 1)
        self._nonc_pos = {k: p for p, k in enumerate(self.nonc_keys)}
        self._c_pos = {k: p for p, k in enumerate(self.c_keys)}

    # sparse working form: dicts holding only nonzero coordinates

    def _red_exp(self, v):
        return v % self.m if self.m is not None else v

    def _red_c(self, k, v):
        mod = self.c_mod[k]
        if mod is None:
            return v % 2 if 2 * k == self.I else v
        return v % mod

    def _acc_exp(self, dest, key, v):
        v = self._red_exp(dest.get(key, 0) + v)
        if v:
            dest[key] = v
        else:
            dest.pop(key, None)

    def _acc_c(self, dest, k, v):
        if self.c_mod[k] == 1:
            return
        v = self._red_c(k, dest.get(k, 0) + v)
        if v:
            dest[k] = v
        else:
            dest.pop(k, None)

    def _acc_terms(self, nonc, cc, terms):
        for key, v in terms:
            if key[0] == "C":
                self._acc_c(cc, key[1], v)
            else:
                self._acc_exp(nonc, key, v)

    def _fold_correction(self, xa, xb, ya, yb, nonc, cc):
        I = self.I
        for i, e in xb.items():
            for j, f in ya.items():
                self._acc_terms(nonc, cc, _fold_ab(I, j, i, -e * f))
        for i, e in xa.items():
            for j, f in ya.items():
                if i > j:
                    self._acc_terms(nonc, cc, _fold_aa(I, i, j, e * f))
        for i, e in xb.items():
            for j, f in yb.items():
                if i > j:
                    self._acc_terms(nonc, cc, _fold_bb(I, i, j, e * f))

    def _srot(self, parts, shift):
        shift %= self.I
        a, b, nonc, cc = parts
        if shift == 0:
            return dict(a), dict(b), dict(nonc), dict(cc)
        ra = {(i + shift) % self.I: v for i, v in a.items()}
        rb = {(i + shift) % self.I: v for i, v in b.items()}
        rn: dict = {}
        rc: dict = {}
        for k, v in cc.items():
            self._acc_c(rc, k, v)
        for key, v in nonc.items():
            self._acc_terms(rn, rc, _fold_key(self.I, key, v, shift))
        # rotation wraps the tail of each ascending block to the front;
        # every wrapped factor re-sorts past every unwrapped one
        wrap = self.I - shift
        for fold, block in ((_fold_aa, a), (_fold_bb, b)):
            for i, e in block.items():
                if i < wrap:
                    continue
                for j, f in block.items():
                    if j >= wrap:
                        continue
                    self._acc_terms(rn, rc, fold(self.I, j + shift,
                                                 (i + shift) % self.I, e * f))
        return ra, rb, rn, rc

    def _smul(self, x, y):
        xa, xb, xn, xc, xt = x
        ra, rb, rn, rc = self._srot(y[:4], xt)
        a = dict(xa)
        for i, v in ra.items():
            self._acc_exp(a, i, v)
        b = dict(xb)
        for i, v in rb.items():
            self._acc_exp(b, i, v)
        nonc = dict(xn)
        cc = dict(xc)
        for key, v in rn.items():
            self._acc_exp(nonc, key, v)
        for k, v in rc.items():
            self._acc_c(cc, k, v)
        self._fold_correction(xa, xb, ra, rb, nonc, cc)
        return a, b, nonc, cc, (xt + y[4]) % self.I

    def _sinv(self, x):
        xa, xb, xn, xc, xt = x
        na = {i: -v for i, v in xa.items()}
        nb = {i: -v for i, v in xb.items()}
        corr_n: dict = {}
        corr_c: dict = {}
        self._fold_correction(xa, xb, na, nb, corr_n, corr_c)
        dn: dict = {}
        for key in set(xn) | set(corr_n):
            self._acc_exp(dn, key, -xn.get(key, 0) - corr_n.get(key, 0))
        dc: dict = {}
        for k in set(xc) | set(corr_c):
            self._acc_c(dc, k, -xc.get(k, 0) - corr_c.get(k, 0))
        na = {i: self._red_exp(v) for i, v in na.items() if self._red_exp(v)}
        nb = {i: self._red_exp(v) for i, v in nb.items() if self._red_exp(v)}
        ra, rb, rn, rc = self._srot((na, nb, dn, dc), -xt)
        return ra, rb, rn, rc, (-xt) % self.I

    def _spack(self, sparse):
        a, b, nonc, cc, t = sparse
        av = [0] * self.I
        for i, v in a.items():
            av[i] = self._red_exp(v)
        bv = [0] * self.I
        for i, v in b.items():
            bv[i] = self._red_exp(v)
        nv = [0] * len(self.nonc_keys)
        for key, v in nonc.items():
            nv[self._nonc_pos[key]] = self._red_exp(v)
        cv = [0] * len(self.c_keys)
        for k, v in cc.items():
            key = ("C", k)
            if key in self._c_pos:
                cv[self._c_pos[key]] = self._red_c(k, v)
        return tuple(av), tuple(bv), tuple(nv), tuple(cv), t % self.I

    def _sunpack(self, dense):
        a = {i: v for i, v in enumerate(dense[0]) if v}
        b = {i: v for i, v in enumerate(dense[1]) if v}
        nonc = {self.nonc_keys[p]: v for p, v in enumerate(dense[2]) if v}
        cc = {self.c_keys[p][1]: v for p, v in enumerate(dense[3]) if v}
        return a, b, nonc, cc, dense[4]

    # dense element API

    def identity(self):
        return self._spack(({}, {}, {}, {}, 0))

    def from_parts(self, a=None, b=None, derived=None, t=0):
        """Element from residue-indexed coordinate dicts (already folded)."""
        nonc: dict = {}
        cc: dict = {}
        for key, v in (derived or {}).items():
            if key[0] == "C":
                cc[key[1]] = cc.get(key[1], 0) + v
            else:
                nonc[key] = nonc.get(key, 0) + v
        return self._spack((dict(a or {}), dict(b or {}), nonc, cc, t))

    def mul(self, x, y):
        return self._spack(self._smul(self._sunpack(x), self._sunpack(y)))

    def inv(self, x):
        return self._spack(self._sinv(self._sunpack(x)))

    def conj(self, x, g):
        return self.mul(self.inv(g), self.mul(x, g))

    def rotate(self, x, shift):
        parts = self._sunpack(x)
        return self._spack(self._srot(parts[:4], shift) + (parts[4],))

    def _simage(self, g: GElement):
        acc = ({}, {}, {}, {}, 0)
        h = g.d_part
        for i in sorted(h.a_part):
            e = self._red_exp(h.a_part[i])
            if e:
                acc = self._smul(acc, ({i % self.I: e}, {}, {}, {}, 0))
        for i in sorted(h.b_part):
            e = self._red_exp(h.b_part[i])
            if e:
                acc = self._smul(acc, ({}, {i % self.I: e}, {}, {}, 0))
        nonc: dict = {}
        cc: dict = {}
        for key, v in h.derived.items():
            self._acc_terms(nonc, cc, _fold_key(self.I, key, v))
        if nonc or cc:
            acc = self._smul(acc, ({}, {}, nonc, cc, 0))
        if g.t_exp % self.I:
            acc = self._smul(acc, ({}, {}, {}, {}, g.t_exp % self.I))
        return acc

    def image(self, g: GElement):
        """Image of a group element. Generator factors are pushed through
        one at a time in ascending index order so the folded reordering
        corrections are picked up exactly."""
        return self._spack(self._simage(g))

    def image_is_trivial(self, g: GElement) -> bool:
        a, b, nonc, cc, t = self._simage(g)
        return not a and not b and not nonc and not cc and t % self.I == 0

    def is_finite(self) -> bool:
        return self.m is not None and all(v is not None for v in self.c_mod.values())

    def order(self) -> int:
        if not self.is_finite():
            raise ValueError("order is only defined for finite contexts")
        total = self.I * self.m ** (2 * self.I + len(self.nonc_keys))
        for k in range(1, self.I // 2 + 1):
            total *= self.c_mod[k]
        return total

    def elements(self):
        if not self.is_finite():
            raise ValueError("cannot enumerate an infinite context")
        cmods = [self.c_mod[key[1]] for key in self.c_keys]
        for t in range(self.I):
            for a in product(range(self.m), repeat=self.I):
                for b in product(range(self.m), repeat=self.I):
                    for nonc in product(range(self.m), repeat=len(self.nonc_keys)):
                        for cc in product(*[range(mm) for mm in cmods]):
                            yield (a, b, nonc, cc, t)


def _two_adic_valuation(n: int) -> int:
    s = 0
    while n % 2 == 0:
        n //= 2
        s += 1
    return s


def _cycle_residues(I: int):
    """One full period of the residues 2^j mod I for j at and past the
    2-adic valuation of I, together with that valuation."""
    s = _two_adic_valuation(I)
    r = pow(2, s, I)
    out = [r]
    nxt = (r * 2) % I
    while nxt != r:
        out.append(nxt)
        nxt = (nxt * 2) % I
    return s, out


def required_c_modulus(I: int, k: int, m: int, d) -> int:
    """Largest legitimate modulus for the folded central index k: the gcd
    of m, the 2-torsion bound at k = I/2, and every d(j) whose relator
    folds onto k or I-k."""
    if not 1 <= k <= I // 2:
        raise ValueError("k must lie in 1..I//2")
    g = m
    if 2 * k == I:
        g = math.gcd(g, 2)
    targets = {k % I, (I - k) % I}
    s, cycle = _cycle_residues(I)
    r = 1 % I
    for j in range(s):
        if r in targets:
            g = math.gcd(g, d.value(j))
        r = (r * 2) % I
    hits = [s + off for off, res in enumerate(cycle) if res in targets]
    if hits:
        if d.strictly_increasing_from is not None:
            g = 1
        elif d.eventual_constant is not None:
            start, tail = d.eventual_constant
            for j0 in hits:
                j = j0
                while j < start:
                    g = math.gcd(g, d.value(j))
                    j += len(cycle)
            g = math.gcd(g, tail)
        else:
            g = 1
    return g


@dataclass(frozen=True)
class FiniteQuotientSpec:
    index_modulus: int
    exponent_modulus: int
    c_moduli: tuple  # ((k, M(k)) for k = 1..I//2)

    def __post_init__(self):
        I, m = self.index_modulus, self.exponent_modulus
        if I < 1 or m < 2:
            raise ValueError("need I >= 1 and m >= 2")
        ks = [k for k, _ in self.c_moduli]
        if ks != list(range(1, I // 2 + 1)):
            raise ValueError("c_moduli must list k = 1..I//2 in order")
        for _, mod in self.c_moduli:
            if mod < 1:
                raise ValueError("moduli must be positive")

    def name(self) -> str:
        return f"Q(I={self.index_modulus},m={self.exponent_modulus})"

    def c_modulus(self, k: int) -> int:
        return dict(self.c_moduli)[k]

    def folded(self) -> FoldedQuotient:
        cached = _FOLDED_CACHE.get(self)
        if cached is None:
            cached = FoldedQuotient(self.index_modulus, self.exponent_modulus,
                                    dict(self.c_moduli))
            _FOLDED_CACHE[self] = cached
        return cached

    def order(self) -> int:
        return self.folded().order()

    def log2_order(self) -> float:
        I, m = self.index_modulus, self.exponent_modulus
        nonc = I * (3 * I - 1) // 2
        total = math.log2(I) + (2 * I + nonc) * math.log2(m)
        for _, mod in self.c_moduli:
            total += math.log2(mod)
        return total


_FOLDED_CACHE: dict = {}
_STRUCTURAL_CACHE: dict = {}


def make_spec(I: int, m: int, d) -> FiniteQuotientSpec:
    """The finite quotient with the largest legitimate c-moduli."""
    mods = tuple((k, required_c_modulus(I, k, m, d)) for k in range(1, I // 2 + 1))
    return FiniteQuotientSpec(I, m, mods)


def quotient_is_well_defined(spec: FiniteQuotientSpec, d) -> bool:
    """True when every defining relator maps to the identity: each declared
    modulus must divide the gcd of everything folding onto its index."""
    I, m = spec.index_modulus, spec.exponent_modulus
    for k, declared in spec.c_moduli:
        if required_c_modulus(I, k, m, d) % declared != 0:
            return False
    return True


def project_mod_I(g: GElement, I: int) -> GElement:
    """Index folding alone: generator and basis indices reduce mod I and
    re-canonicalize in the folded basis, t reduces into 0..I-1, exponents
    stay integers apart from the forced 2-torsion of c_{I/2}."""
    fq = _STRUCTURAL_CACHE.get(I)
    if fq is None:
        fq = FoldedQuotient(I, None, {k: None for k in range(1, I // 2 + 1)})
        _STRUCTURAL_CACHE[I] = fq
    a, b, nonc, cc, t = fq._sunpack(fq.image(g))
    derived = dict(nonc)
    for k, v in cc.items():
        derived[("C", k)] = v
    return GElement(d_element(a, b, derived), t)


def finite_image(g: GElement, spec: FiniteQuotientSpec, d):
    """Image of g in the finite quotient; raises when spec is not a
    legitimate quotient for this d."""
    if not quotient_is_well_defined(spec, d):
        raise ValueError(f"{spec.name()} is not well defined for {d.descriptor}")
    return spec.folded().image(g)


def finite_conjugate(x, y, spec: FiniteQuotientSpec, cap: int = 4096) -> bool:
    """Exhaustive conjugacy test; refuses quotients larger than cap."""
    fq = spec.folded()
    if fq.order() > cap:
        raise ValueError(f"order {fq.order()} exceeds the cap {cap}")
    if x == y:
        return True
    for g in fq.elements():
        if fq.conj(x, g) == y:
            return True
    return False


def _orbit_chain_solve(delta, s, I, m):
    """Particular solution of h[(p-s) mod I] - h[p] = delta[p] (mod m)
    plus one root per orbit, or None. delta is a length-I list."""
    h = [None] * I
    roots = []
    for start in range(I):
        if h[start] is not None:
            continue
        roots.append(start)
        total = 0
        p = start
        val = 0
        while True:
            h[p] = val
            total += delta[p]
            val = (val + delta[p]) % m
            p = (p - s) % I
            if p == start:
                break
        if total % m != 0:
            return None
    return h, roots


def _orbit_members(root, s, I):
    members = []
    p = root
    while True:
        members.append(p)
        p = (p - s) % I
        if p == root:
            break
    return members


def _orbit_closure(fq, key, s):
    """The rotation orbit of a non-central key under shifts by +-s, plus
    every central key those rotations touch."""
    nonc = set()
    cs = set()
    frontier = [key]
    while frontier:
        cur = frontier.pop()
        if cur in nonc:
            continue
        nonc.add(cur)
        for shift in (s, -s):
            for nk, _ in _fold_key(fq.I, cur, 1, shift):
                if nk[0] == "C":
                    cs.add(nk)
                elif nk not in nonc:
                    frontier.append(nk)
    return nonc, cs


def quotient_conjugate_exact(x, y, spec: FiniteQuotientSpec) -> bool:
    """Conjugacy decision inside the quotient, polynomial in I and the
    coordinate support instead of the group order.

    For each t-power of the conjugator the abelianized twisted equation
    is solved orbit by orbit; its kernel (one constant per orbit) and the
    conjugator's derived coordinates then enter one integer linear system
    over the rotation closure of the relevant derived coordinates, with
    per-row modulus slack.
    """
    fq = spec.folded()
    I, m = spec.index_modulus, spec.exponent_modulus
    if x == y:
        return True
    if x[4] != y[4]:
        return False
    s = x[4]
    for n in range(I):
        xr = fq.rotate(x, -n)
        delta_a = [(y[0][p] - xr[0][p]) % m for p in range(I)]
        delta_b = [(y[1][p] - xr[1][p]) % m for p in range(I)]
        solved_a = _orbit_chain_solve(delta_a, s, I, m)
        solved_b = _orbit_chain_solve(delta_b, s, I, m)
        if solved_a is None or solved_b is None:
            continue
        h0a, roots_a = solved_a
        h0b, roots_b = solved_b
        h0 = fq.from_parts(a={i: v for i, v in enumerate(h0a) if v},
                           b={i: v for i, v in enumerate(h0b) if v})
        mid = fq.conj(xr, h0)
        if mid[0] != y[0] or mid[1] != y[1]:
            raise AssertionError("abelianized stage lost synchronization")
        rest = _derived_stage(fq, mid, y, s, roots_a, roots_b)
        if rest is None:
            continue
        kappa, delta_der = rest
        g = fq.from_parts(t=n)
        g = fq.mul(g, h0)
        g = fq.mul(g, kappa)
        g = fq.mul(g, fq.from_parts(derived=delta_der))
        if fq.conj(x, g) != y:
            raise AssertionError("derived stage produced a bad conjugator")
        return True
    return False


def _qpow(fq, x, n):
    acc = fq.identity()
    base = x
    while n:
        if n & 1:
            acc = fq.mul(acc, base)
        base = fq.mul(base, base)
        n >>= 1
    return acc


def _derived_stage(fq, mid, y, s, roots_a, roots_b):
    """Match the derived coordinates of mid to y by a rotation-invariant
    abelian conjugator plus a derived conjugator part.

    The invariant part is parametrized by powers of one generator per
    index orbit (the ascending product of that orbit's a's or b's). Per
    unit power such a generator contributes its commutator with mid's
    abelianization plus the central cost of rotating the generator
    itself, so the whole stage stays one integer linear system. Returns
    (kappa element, derived coordinate dict) or None."""
    I, m = fq.I, fq.m

    def key_mod(key):
        return m if key[0] != "C" else fq.c_mod[key[1]]

    orbits_a = [_orbit_members(r, s, I) for r in roots_a]
    orbits_b = [_orbit_members(r, s, I) for r in roots_b]
    ma, mb = mid[0], mid[1]
    kappa_cols = []
    orbit_gens = []

    def rotation_cost(col, gen):
        w = fq.mul(fq.inv(gen), fq.rotate(gen, s))
        wa, wb, wn, wc, _ = fq._sunpack(w)
        if wa or wb:
            raise AssertionError("orbit generator rotation left the centre")
        for key, v in wn.items():
            col[key] = col.get(key, 0) + v
        for k, v in wc.items():
            col[("C", k)] = col.get(("C", k), 0) + v

    for members in orbits_a:
        col: dict = {}
        for i in members:
            for u in range(I):
                if ma[u]:
                    for key, v in _fold_aa(I, u, i, ma[u]):
                        col[key] = col.get(key, 0) + v
                if mb[u]:
                    for key, v in _fold_ab(I, i, u, -mb[u]):
                        col[key] = col.get(key, 0) + v
        gen = fq.from_parts(a={i: 1 for i in members})
        rotation_cost(col, gen)
        orbit_gens.append(gen)
        kappa_cols.append(col)
    for members in orbits_b:
        col = {}
        for i in members:
            for u in range(I):
                if ma[u]:
                    for key, v in _fold_ab(I, u, i, ma[u]):
                        col[key] = col.get(key, 0) + v
                if mb[u]:
                    for key, v in _fold_bb(I, u, i, mb[u]):
                        col[key] = col.get(key, 0) + v
        gen = fq.from_parts(b={i: 1 for i in members})
        rotation_cost(col, gen)
        orbit_gens.append(gen)
        kappa_cols.append(col)

    rhs_keys: dict = {}
    for pos, key in enumerate(fq.nonc_keys):
        diff = (y[2][pos] - mid[2][pos]) % m
        if diff:
            rhs_keys[key] = diff
    for pos, key in enumerate(fq.c_keys):
        diff = (y[3][pos] - mid[3][pos]) % fq.c_mod[key[1]]
        if diff:
            rhs_keys[key] = diff

    seeds = set(rhs_keys)
    for col in kappa_cols:
        seeds.update(col)
    nonc_rel: set = set()
    c_rel: set = set()
    for key in seeds:
        if key[0] == "C":
            if fq.c_mod[key[1]] != 1:
                c_rel.add(key)
            continue
        oc, cs = _orbit_closure(fq, key, s)
        nonc_rel |= oc
        c_rel |= {k for k in cs if fq.c_mod[k[1]] != 1}
    row_keys = sorted(nonc_rel) + sorted(c_rel)
    if not row_keys:
        return fq.identity(), {}
    delta_cols = sorted(nonc_rel)

    row_pos = {key: r for r, key in enumerate(row_keys)}
    base = len(kappa_cols)
    slack = base + len(delta_cols)
    rows = [[0] * (slack + len(row_keys)) for _ in row_keys]
    rhs = [rhs_keys.get(key, 0) for key in row_keys]
    for c, col in enumerate(kappa_cols):
        for key, v in col.items():
            if key in row_pos:
                rows[row_pos[key]][c] = v % key_mod(key)
    for c, key in enumerate(delta_cols):
        # conjugating by the derived part contributes (rotate by s) - id
        rows[row_pos[key]][base + c] -= 1
        for nk, v in _fold_key(fq.I, key, 1, s):
            if nk[0] == "C" and fq.c_mod[nk[1]] == 1:
                continue
            rows[row_pos[nk]][base + c] += v
    for r, key in enumerate(row_keys):
        rows[r][slack + r] = key_mod(key)

    solution = hnf_solve(IntegerLinearSystem(tuple(tuple(r) for r in rows),
                                             tuple(rhs)))
    if solution is None:
        return None
    kappa = fq.identity()
    for idx, gen in enumerate(orbit_gens):
        v = solution[idx] % m
        if v:
            kappa = fq.mul(kappa, _qpow(fq, gen, v))
    delta_der: dict = {}
    for idx, key in enumerate(delta_cols):
        v = solution[base + idx] % m
        if v:
            delta_der[key] = v
    return kappa, delta_der
