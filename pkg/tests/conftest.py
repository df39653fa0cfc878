"""Shared oracles and generators.

The main oracle is an independent model of the ambient free 2-step
nilpotent group on the generators a_i, b_i: elements are triples
(v, w, z) with v the abelianized exponent vector over keys ('a', i) /
('b', i), w an exponent vector over ordered generator pairs K < L
(the basis commutators [K, L] of the free group), and z a central
vector over the c-indices k >= 1. Multiplication adds a bilinear
cocycle to w: collecting the right factor's generators through the
left factor's produces [L, K]^{v1[L] * v2[K]} for every inverted pair,
so

    gamma(v1, v2)[(K, L)] = -v1[L] * v2[K]   for K < L.

The production code never sees this model. A linear reduction rho maps
it onto the packaged normal form (the pair [a_i, b_j] with i > j
rewrites to AB(j, i) - C(i - j)), and agreement of rho with the
packaged collection over random words is the correctness oracle for
the whole coordinate layer.
"""

import random
from itertools import product

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from conjlab.extension import GElement, g_conj, g_mul, parse_word
from conjlab.nilpotent import DElement, d_element
from conjlab.sepfunc import from_table, constant_prime, nth_prime

settings.register_profile(
    "conjlab",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("conjlab")


# ---------------------------------------------------------------- free model

def free_identity():
    return ({}, {}, {})


def _bump(d, key, delta):
    v = d.get(key, 0) + delta
    if v:
        d[key] = v
    else:
        d.pop(key, None)


def free_letter(kind, idx, exp):
    """Oracle element of a single letter a_idx^exp, b_idx^exp, c_idx^exp."""
    if exp == 0:
        return free_identity()
    if kind in ("a", "b"):
        return ({(kind, idx): exp}, {}, {})
    if kind != "c":
        raise ValueError(kind)
    z = {}
    if idx > 0:
        z[idx] = exp
    elif idx < 0:
        z[-idx] = -exp
    return ({}, {}, z)


def free_mul(x, y):
    v1, w1, z1 = x
    v2, w2, z2 = y
    v = dict(v1)
    for key, e in v2.items():
        _bump(v, key, e)
    w = dict(w1)
    for key, e in w2.items():
        _bump(w, key, e)
    for L, eL in v1.items():
        for K, eK in v2.items():
            if K < L:
                _bump(w, (K, L), -eL * eK)
    z = dict(z1)
    for k, e in z2.items():
        _bump(z, k, e)
    return v, w, z


def free_inv(x):
    v, w, z = x
    iv = {k: -e for k, e in v.items()}
    iw = {key: -e for key, e in w.items()}
    keys = list(v)
    for i, K in enumerate(keys):
        for L in keys[i + 1:]:
            P, Q = (K, L) if K < L else (L, K)
            _bump(iw, (P, Q), -v[P] * v[Q])
    iz = {k: -e for k, e in z.items()}
    return iv, iw, iz


def free_shift(x, n):
    v, w, z = x
    sv = {(kind, i + n): e for (kind, i), e in v.items()}
    sw = {((k1, i + n), (k2, j + n)): e
          for ((k1, i), (k2, j)), e in w.items()}
    return sv, sw, dict(z)


def rho(x) -> DElement:
    """Reduce an oracle element to the packaged normal form."""
    v, w, z = x
    a = {i: e for (kind, i), e in v.items() if kind == "a"}
    b = {i: e for (kind, i), e in v.items() if kind == "b"}
    der = {}
    for ((k1, i), (k2, j)), e in w.items():
        if k1 == "a" and k2 == "a":
            _bump(der, ("AA", i, j), e)
        elif k1 == "b" and k2 == "b":
            _bump(der, ("BB", i, j), e)
        elif i <= j:
            _bump(der, ("AB", i, j), e)
        else:
            _bump(der, ("AB", j, i), e)
            _bump(der, ("C", i - j), -e)
    for k, e in z.items():
        _bump(der, ("C", k), e)
    return d_element(a=a, b=b, derived=der)


# oracle for the shift extension: pairs (free element, t exponent)

def og_identity():
    return free_identity(), 0


def og_mul(x, y):
    h1, n1 = x
    h2, n2 = y
    return free_mul(h1, free_shift(h2, n1)), n1 + n2


def og_inv(x):
    h, n = x
    return free_shift(free_inv(h), -n), -n


def rho_g(x) -> GElement:
    h, n = x
    return GElement(rho(h), n)


def og_from_letters(letters):
    acc = og_identity()
    for kind, idx, exp in letters:
        if kind == "t":
            step = (free_identity(), exp)
        else:
            step = (free_letter(kind, idx, exp), 0)
        acc = og_mul(acc, step)
    return acc


# ------------------------------------------------------------- word plumbing

def letters_to_word(letters) -> str:
    tokens = []
    for kind, idx, exp in letters:
        base = "t" if kind == "t" else f"{kind}[{idx}]"
        tokens.append(base if exp == 1 else f"{base}^{exp}")
    return " ".join(tokens)


def random_letters(rng: random.Random, max_len=8, idx_range=(-4, 4),
                   exp_range=(-3, 3), families="abct"):
    letters = []
    for _ in range(rng.randrange(max_len + 1)):
        kind = rng.choice(families)
        idx = rng.randint(*idx_range)
        if kind == "c" and idx == 0:
            idx = 1
        exp = 0
        while exp == 0:
            exp = rng.randint(*exp_range)
        letters.append((kind, idx, exp))
    return letters


def random_word(rng: random.Random, **kw) -> str:
    return letters_to_word(random_letters(rng, **kw))


LETTER_ELEMENTS = {w: parse_word(w) for w in "tabTAB"}


def conj_ball(x: GElement, depth: int, key):
    """Canonical keys of every conjugate of x by a word of length <= depth,
    via breadth first search over single-letter conjugations."""
    start = key(x)
    seen = {start: x}
    frontier = [x]
    for _ in range(depth):
        nxt = []
        for g in frontier:
            for el in LETTER_ELEMENTS.values():
                h = g_conj(g, el)
                k = key(h)
                if k not in seen:
                    seen[k] = h
                    nxt.append(h)
        frontier = nxt
    return seen


def canonical_key(g: GElement, d):
    """Hashable exact-equality key in the quotient group, for a d whose
    values are all cheap to compute (tables, constants)."""
    der = []
    for key in sorted(g.d_part.derived):
        gamma = g.d_part.derived[key]
        if key[0] == "C":
            k = key[1]
            if k >= 1 and k & (k - 1) == 0:
                gamma %= d.value(k.bit_length() - 1)
        if gamma:
            der.append((key, gamma))
    return (g.t_exp,
            tuple(sorted(g.d_part.a_part.items())),
            tuple(sorted(g.d_part.b_part.items())),
            tuple(der))


# ------------------------------------------------------- hypothesis strategies

idx_st = st.integers(min_value=-4, max_value=4)
nz_idx_st = st.sampled_from([-4, -3, -2, -1, 1, 2, 3, 4])
exp_st = st.sampled_from([-3, -2, -1, 1, 2, 3])

_d_letter = st.one_of(
    st.tuples(st.just("a"), idx_st, exp_st),
    st.tuples(st.just("b"), idx_st, exp_st),
    st.tuples(st.just("c"), nz_idx_st, exp_st),
)
letter_st = st.one_of(_d_letter, st.tuples(st.just("t"), st.just(0), exp_st))

letters_st = st.lists(letter_st, max_size=8)
d_letters_st = st.lists(_d_letter, max_size=8)


def letters_to_g(letters) -> GElement:
    acc = GElement()
    for kind, idx, exp in letters:
        acc = g_mul(acc, parse_word(letters_to_word([(kind, idx, exp)])))
    return acc


# ------------------------------------------------------------------ fixtures

@pytest.fixture
def d_table():
    return from_table([2, 31, 127, 1021, 8191])


@pytest.fixture
def d_const2():
    return constant_prime(2)


@pytest.fixture
def d_nth():
    return nth_prime()


def box_solutions(rows, rhs, bound):
    """Every integer solution of rows * x = rhs with coordinates in
    [-bound, bound], by exhaustive enumeration (numpy-backed)."""
    import numpy as np

    ncols = len(rows[0]) if rows else 0
    if ncols == 0:
        return [()] if all(v == 0 for v in rhs) else []
    A = np.array(rows, dtype=np.int64)
    grid = np.array(list(product(range(-bound, bound + 1), repeat=ncols)),
                    dtype=np.int64)
    hits = (A @ grid.T == np.array(rhs, dtype=np.int64)[:, None]).all(axis=0)
    return [tuple(int(v) for v in row) for row in grid[hits]]
