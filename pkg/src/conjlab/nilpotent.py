"""Normal forms and exact collection for a 2-step nilpotent group with
integer-indexed generator families.

Elements are products of generators a_i, b_i (i ranging over all integers)
whose commutators are central. The derived subgroup is free abelian on the
classes of [a_i,a_j] (i<j), [b_i,b_j] (i<j) and [a_i,b_j], modulo the
identifications [a_i,b_j][b_i,a_j] = c_{j-i}; the central elements c_k are
further subject to relators c_{2^j}^{d(j)} for a configurable prime-valued
function d (see the sepfunc module).

Normal form: ascending product of a-generators, then ascending product of
b-generators, then an exponent dictionary over the derived basis

    ('AA', i, j) with i < j     class of [a_i, a_j]
    ('BB', i, j) with i < j     class of [b_i, b_j]
    ('AB', i, j) with i <= j    class of [a_i, b_j]
    ('C', k) with k >= 1        the central element c_k

For i > j the commutator [a_i,b_j] rewrites to ('AB', j, i) minus ('C', i-j).
c_0 is trivial and c_{-k} is the inverse of c_k, so those keys never occur.

All coordinates are arbitrary-precision integers. Elements are never mutated
after construction; every operation returns a fresh element. Because d(j)
may be astronomically large, a C coordinate is only reduced when d(j) is
known to be small enough to reach it (is_identity_d, reduce_central). Plain
== on elements is raw coordinate identity, not group equality; use d_equal.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

_FAMILIES = ("AA", "AB", "BB")


def _clean(entries: Optional[dict]) -> dict:
    if not entries:
        return {}
    return {k: v for k, v in entries.items() if v != 0}


def _check_key(key) -> None:
    if not isinstance(key, tuple) or not key:
        raise ValueError(f"malformed derived key {key!r}")
    kind = key[0]
    if kind == "C":
        if len(key) != 2 or not isinstance(key[1], int) or key[1] < 1:
            raise ValueError(f"malformed C key {key!r}")
        return
    if kind not in _FAMILIES or len(key) != 3:
        raise ValueError(f"malformed derived key {key!r}")
    i, j = key[1], key[2]
    if not (isinstance(i, int) and isinstance(j, int)):
        raise ValueError(f"malformed derived key {key!r}")
    if kind in ("AA", "BB") and not i < j:
        raise ValueError(f"{kind} key needs i < j, got {key!r}")
    if kind == "AB" and not i <= j:
        raise ValueError(f"AB key needs i <= j, got {key!r}")


@dataclass(frozen=True)
class DElement:
    """Normal form of an element of the 2-step group D."""

    a_part: dict = field(default_factory=dict)
    b_part: dict = field(default_factory=dict)
    derived: dict = field(default_factory=dict)


def d_element(a: Optional[dict] = None, b: Optional[dict] = None,
              derived: Optional[dict] = None) -> DElement:
    """Build an element from coordinate dicts, validating derived keys."""
    der = _clean(derived)
    for key in der:
        _check_key(key)
    return DElement(_clean(a), _clean(b), der)


def d_identity() -> DElement:
    return DElement()


def generator_a(i: int) -> DElement:
    return DElement({i: 1})


def generator_b(i: int) -> DElement:
    return DElement({}, {i: 1})


def central_c(k: int) -> DElement:
    """The central element c_k; c_0 is trivial and c_{-k} = c_k^{-1}."""
    return DElement({}, {}, dict(c_terms(k)))


# Canonical coordinates of single commutators. Each function returns a
# tuple of (basis key, coefficient) pairs.

def c_terms(k: int, coeff: int = 1):
    if k == 0 or coeff == 0:
        return ()
    if k > 0:
        return ((("C", k), coeff),)
    return ((("C", -k), -coeff),)


def aa_terms(i: int, j: int, coeff: int = 1):
    """Coordinates of [a_i, a_j]^coeff."""
    if i == j or coeff == 0:
        return ()
    if i < j:
        return ((("AA", i, j), coeff),)
    return ((("AA", j, i), -coeff),)


def bb_terms(i: int, j: int, coeff: int = 1):
    """Coordinates of [b_i, b_j]^coeff."""
    if i == j or coeff == 0:
        return ()
    if i < j:
        return ((("BB", i, j), coeff),)
    return ((("BB", j, i), -coeff),)


def ab_terms(i: int, j: int, coeff: int = 1):
    """Coordinates of [a_i, b_j]^coeff; rewrites i > j through c_{i-j}."""
    if coeff == 0:
        return ()
    if i <= j:
        return ((("AB", i, j), coeff),)
    return ((("AB", j, i), coeff),) + c_terms(i - j, -coeff)


def ba_terms(i: int, j: int, coeff: int = 1):
    """Coordinates of [b_i, a_j]^coeff, the inverse of [a_j, b_i]^coeff."""
    return ab_terms(j, i, -coeff)


def _acc(dest: dict, terms) -> None:
    for key, c in terms:
        v = dest.get(key, 0) + c
        if v:
            dest[key] = v
        else:
            dest.pop(key, None)


def _acc_dict(dest: dict, src: dict) -> None:
    for key, c in src.items():
        v = dest.get(key, 0) + c
        if v:
            dest[key] = v
        else:
            dest.pop(key, None)


def _add_vec(u: dict, v: dict) -> dict:
    out = dict(u)
    for i, e in v.items():
        s = out.get(i, 0) + e
        if s:
            out[i] = s
        else:
            out.pop(i, None)
    return out


def _neg_vec(u: dict) -> dict:
    return {i: -e for i, e in u.items()}


def _mul_correction(xa: dict, xb: dict, ya: dict, yb: dict) -> dict:
    """Derived correction for (A(xa) B(xb)) * (A(ya) B(yb)).

    Moving the second factor's a-generators left past the first factor's
    b-generators contributes [b_i, a_j] terms; merging the two ascending
    a-products (and b-products) contributes one commutator per inverted
    index pair. All corrections are central, so they accumulate freely.
    """
    corr: dict = {}
    for i, e in xb.items():
        for j, f in ya.items():
            _acc(corr, ba_terms(i, j, e * f))
    for i, e in xa.items():
        for j, f in ya.items():
            if i > j:
                _acc(corr, aa_terms(i, j, e * f))
    for i, e in xb.items():
        for j, f in yb.items():
            if i > j:
                _acc(corr, bb_terms(i, j, e * f))
    return corr


def d_mul(x: DElement, y: DElement) -> DElement:
    der = dict(x.derived)
    _acc_dict(der, y.derived)
    _acc_dict(der, _mul_correction(x.a_part, x.b_part, y.a_part, y.b_part))
    return DElement(_add_vec(x.a_part, y.a_part),
                    _add_vec(x.b_part, y.b_part), der)


def d_inv(x: DElement) -> DElement:
    na, nb = _neg_vec(x.a_part), _neg_vec(x.b_part)
    der = {k: -v for k, v in x.derived.items()}
    corr = _mul_correction(x.a_part, x.b_part, na, nb)
    _acc_dict(der, {k: -v for k, v in corr.items()})
    return DElement(na, nb, der)


def d_pow(x: DElement, n: int) -> DElement:
    if n < 0:
        return d_pow(d_inv(x), -n)
    acc = d_identity()
    base = x
    while n:
        if n & 1:
            acc = d_mul(acc, base)
        n >>= 1
        if n:
            base = d_mul(base, base)
    return acc


def d_commutator(x: DElement, y: DElement) -> DElement:
    """x y x^{-1} y^{-1}; always lies in the derived subgroup."""
    return d_mul(d_mul(d_mul(x, y), d_inv(x)), d_inv(y))


def phi_shift(x: DElement, n: int) -> DElement:
    """The shift automorphism: indices of a, b move by n, c_k is fixed."""
    if n == 0:
        return x
    a = {i + n: e for i, e in x.a_part.items()}
    b = {i + n: e for i, e in x.b_part.items()}
    der = {}
    for key, v in x.derived.items():
        if key[0] == "C":
            der[key] = v
        else:
            der[(key[0], key[1] + n, key[2] + n)] = v
    return DElement(a, b, der)


def power_of_two_exponent(k: int) -> Optional[int]:
    """j with k == 2^j, or None when k is not a power of two."""
    if k >= 1 and k & (k - 1) == 0:
        return k.bit_length() - 1
    return None


def is_in_derived(x: DElement) -> bool:
    return not x.a_part and not x.b_part


def is_in_C(x: DElement) -> bool:
    return is_in_derived(x) and all(key[0] == "C" for key in x.derived)


def is_identity_d(x: DElement, d) -> bool:
    """Triviality test under the relators c_{2^j}^{d(j)}.

    A C coordinate gamma at index 2^j vanishes exactly when d(j) divides
    gamma. The cheap budgeted query d.at_least(j, |gamma|+1) settles the
    frequent case d(j) > |gamma| without ever computing d(j).
    """
    if x.a_part or x.b_part:
        return False
    for key in sorted(x.derived):
        if key[0] != "C":
            return False
        gamma = x.derived[key]
        j = power_of_two_exponent(key[1])
        if j is None:
            return False
        if d.at_least(j, abs(gamma) + 1):
            return False
        if gamma % d.value(j) != 0:
            return False
    return True


def reduce_central(x: DElement, d) -> DElement:
    """Reduce each C coordinate at a power-of-two index into [0, d(j)),
    but only when d(j) is small enough to reach the coordinate."""
    der = dict(x.derived)
    for key in list(der):
        if key[0] != "C":
            continue
        j = power_of_two_exponent(key[1])
        if j is None:
            continue
        gamma = der[key]
        if not d.at_least(j, abs(gamma) + 1):
            g = gamma % d.value(j)
            if g:
                der[key] = g
            else:
                del der[key]
    return DElement(dict(x.a_part), dict(x.b_part), der)


def d_equal(x: DElement, y: DElement, d) -> bool:
    return is_identity_d(d_mul(d_inv(x), y), d)
