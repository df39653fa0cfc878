"""The shift extension G: pairs (h, n) with h in D and n the t-exponent,
multiplied by (h1, n1)(h2, n2) = (h1 * shift^{n1}(h2), n1 + n2).

Conjugation by t shifts generator indices upward: t a_i t^{-1} = a_{i+1}.

Words use whitespace-separated tokens over the letters

    t a b        the generators t, a_0, b_0
    T A B        their inverses
    x^<int>      repetition, e.g. t^-3
    a[i] b[i]    shorthand for t^i a t^-i and t^i b t^-i
    c[k]         shorthand for [a_0,b_k][b_0,a_k]

word_length measures words with the shorthands expanded: a[i] and b[i]
count as 2|i|+1 letters, c[k] as 8|k|+8.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional

from .nilpotent import (
    DElement,
    c_terms,
    d_element,
    d_identity,
    d_inv,
    d_mul,
    is_identity_d,
    is_in_C,
    phi_shift,
)


@dataclass(frozen=True)
class GElement:
    d_part: DElement = field(default_factory=d_identity)
    t_exp: int = 0


def g_identity() -> GElement:
    return GElement()


def g_t(n: int = 1) -> GElement:
    return GElement(d_identity(), n)


def g_from_d(h: DElement) -> GElement:
    return GElement(h, 0)


def g_mul(x: GElement, y: GElement) -> GElement:
    return GElement(d_mul(x.d_part, phi_shift(y.d_part, x.t_exp)),
                    x.t_exp + y.t_exp)


def g_inv(x: GElement) -> GElement:
    return GElement(phi_shift(d_inv(x.d_part), -x.t_exp), -x.t_exp)


def g_pow(x: GElement, n: int) -> GElement:
    if n < 0:
        return g_pow(g_inv(x), -n)
    acc = g_identity()
    base = x
    while n:
        if n & 1:
            acc = g_mul(acc, base)
        n >>= 1
        if n:
            base = g_mul(base, base)
    return acc


def g_conj(x: GElement, by: GElement) -> GElement:
    """by^{-1} x by."""
    return g_mul(g_mul(g_inv(by), x), by)


def g_commutator(x: GElement, y: GElement) -> GElement:
    return g_mul(g_mul(g_mul(x, y), g_inv(x)), g_inv(y))


def is_identity_g(x: GElement, d) -> bool:
    return x.t_exp == 0 and is_identity_d(x.d_part, d)


def g_equal(x: GElement, y: GElement, d) -> bool:
    return is_identity_g(g_mul(g_inv(x), y), d)


class WordParseError(ValueError):
    """Raised on malformed words; carries the offending position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


_TOKEN = re.compile(r"^(?:([tabTAB])|([abc])\[(-?\d+)\])(?:\^(-?\d+))?$")


def _token_parts(token: str, position: int):
    m = _TOKEN.match(token)
    if m is None:
        raise WordParseError(f"bad token {token!r}", position)
    letter, macro, idx, rep = m.groups()
    exp = int(rep) if rep is not None else 1
    if letter is not None:
        base = letter.lower()
        if letter.isupper():
            exp = -exp
        return base, 0, exp
    return macro, int(idx), exp


def _token_element(kind: str, idx: int, exp: int) -> GElement:
    if kind == "t":
        return GElement(d_identity(), exp)
    if kind == "a":
        return GElement(d_element(a={idx: exp}))
    if kind == "b":
        return GElement(d_element(b={idx: exp}))
    return GElement(DElement({}, {}, dict(c_terms(idx, exp))))


def parse_word(text: str) -> GElement:
    """Parse a word into a group element; see the module docstring for
    the grammar. Raises WordParseError with the offending position."""
    out = g_identity()
    for m in re.finditer(r"\S+", text):
        kind, idx, exp = _token_parts(m.group(), m.start())
        out = g_mul(out, _token_element(kind, idx, exp))
    return out


def word_length(text: str) -> int:
    """Letter count of the word with all shorthands expanded."""
    total = 0
    for m in re.finditer(r"\S+", text):
        kind, idx, exp = _token_parts(m.group(), m.start())
        if kind == "t":
            base = 1
        elif kind in ("a", "b"):
            base = 2 * abs(idx) + 1
        else:
            base = 8 * abs(idx) + 8
        total += base * abs(exp)
    return total


def c_witness_word(k: int) -> str:
    """A word of length exactly 8k+8 over t,a,b and inverses whose parse
    is central_c(k): it spells [a_0, b_k][b_0, a_k] with b_k and a_k
    written as t-conjugates."""
    if k < 1:
        raise ValueError("k must be at least 1")
    return (f"a t^{k} b t^-{k} A t^{k} B t^-{k} "
            f"b t^{k} a t^-{k} B t^{k} A t^-{k}")


def _exp_token(base: str, exp: int) -> str:
    return base if exp == 1 else f"{base}^{exp}"


def spell_element(g: GElement) -> str:
    """A word that parses back to g coordinate for coordinate. Commutator
    coordinates are spelled as [x, y^e] with y^e expanded, so the word
    stays short even for large exponents. The identity spells as ''."""
    tokens = []
    h = g.d_part
    for i in sorted(h.a_part):
        tokens.append(_exp_token(f"a[{i}]", h.a_part[i]))
    for i in sorted(h.b_part):
        tokens.append(_exp_token(f"b[{i}]", h.b_part[i]))
    for key in sorted(h.derived):
        e = h.derived[key]
        if key[0] == "C":
            tokens.append(_exp_token(f"c[{key[1]}]", e))
            continue
        kind, i, j = key
        left = "a" if kind in ("AA", "AB") else "b"
        right = "b" if kind in ("AB", "BB") else "a"
        tokens.extend([f"{left}[{i}]", _exp_token(f"{right}[{j}]", e),
                       f"{left}[{i}]^-1", _exp_token(f"{right}[{j}]", -e)])
    if g.t_exp:
        tokens.append(_exp_token("t", g.t_exp))
    return " ".join(tokens)


def abelianization_min_index(g: GElement) -> Optional[int]:
    """Least generator index in the a/b exponent support, or None when the
    d-part lies in the derived subgroup."""
    support = set(g.d_part.a_part) | set(g.d_part.b_part)
    return min(support) if support else None


def derived_support(g: GElement):
    """Index interval hull (lo, hi) of the d-part: over the a/b support
    when that is nonempty, otherwise over the non-C derived keys. Returns
    None for central elements. Requires t_exp == 0."""
    if g.t_exp != 0:
        raise ValueError("derived_support needs t_exp == 0")
    h = g.d_part
    support = set(h.a_part) | set(h.b_part)
    if support:
        return (min(support), max(support))
    indices = set()
    for key in h.derived:
        if key[0] != "C":
            indices.update((key[1], key[2]))
    if indices:
        return (min(indices), max(indices))
    if is_in_C(h):
        return None
    return None


_DOC_KEY = re.compile(r"^(AA|AB|BB)\((-?\d+),(-?\d+)\)$|^C\((\d+)\)$")


def _key_to_str(key) -> str:
    if key[0] == "C":
        return f"C({key[1]})"
    return f"{key[0]}({key[1]},{key[2]})"


def _str_to_key(s: str):
    m = _DOC_KEY.match(s)
    if m is None:
        raise ValueError(f"bad derived key string {s!r}")
    kind, i, j, k = m.groups()
    if k is not None:
        return ("C", int(k))
    return (kind, int(i), int(j))


def element_to_doc(g: GElement) -> dict:
    """Structured form: {a: [[index, exp]...], b: [...],
    derived: [[key, exp]...], t: int}, every list sorted by index."""
    h = g.d_part
    return {
        "a": [[i, h.a_part[i]] for i in sorted(h.a_part)],
        "b": [[i, h.b_part[i]] for i in sorted(h.b_part)],
        "derived": [[_key_to_str(k), h.derived[k]] for k in sorted(h.derived)],
        "t": g.t_exp,
    }


def element_from_doc(doc: dict) -> GElement:
    a = {int(i): int(e) for i, e in doc.get("a", [])}
    b = {int(i): int(e) for i, e in doc.get("b", [])}
    der = {_str_to_key(s): int(e) for s, e in doc.get("derived", [])}
    return GElement(d_element(a, b, der), int(doc.get("t", 0)))
