"""Interleaved conjugator/quotient search and the witness growth table."""

import random

import pytest
from conftest import letters_to_g, random_letters

from conjlab.conjugacy import conjugacy_decide
from conjlab.extension import GElement, g_conj, g_equal, g_inv, g_mul, \
    parse_word
from conjlab.nilpotent import central_c, d_mul, generator_a
from conjlab.quotients import make_spec, required_c_modulus
from conjlab.search import (
    I_LADDER,
    SearchBudget,
    growth_table,
    mckinsey_search,
    rf_witness_order,
    spec_stream,
)
from conjlab.sepfunc import constant_prime, from_table

D_TABLE = from_table([2, 31, 127, 1021, 8191])


def prime_powers_up_to(cap):
    out = []
    for p in range(2, cap + 1):
        if all(p % q for q in range(2, int(p ** 0.5) + 1)):
            q = p
            while q <= cap:
                out.append(q)
                q *= p
    return out


# ------------------------------------------------------------- spec stream

def test_spec_stream_full_grid():
    specs = spec_stream(D_TABLE, SearchBudget())
    assert len(specs) == len(I_LADDER) * len(prime_powers_up_to(8192))
    assert specs[0].order() == 8
    orders = [s.order() for s in specs[:60]]
    assert orders == sorted(orders)
    assert I_LADDER == (1, 2, 3, 4, 6, 8, 12, 16, 24, 32, 48, 64)


def test_spec_stream_max_order_is_exact():
    keep = spec_stream(D_TABLE, SearchBudget(max_order=2048))
    ids = {(s.index_modulus, s.exponent_modulus) for s in keep}
    assert (2, 2) in ids
    assert all(s.order() <= 2048 for s in keep)
    drop = spec_stream(D_TABLE, SearchBudget(max_order=2047))
    ids = {(s.index_modulus, s.exponent_modulus) for s in drop}
    assert (2, 2) not in ids
    assert all(s.order() <= 2047 for s in drop)


def test_spec_stream_max_specs():
    assert len(spec_stream(D_TABLE, SearchBudget(max_specs=7))) == 7


# --------------------------------------------------------------- mckinsey

def test_mckinsey_equal_words():
    g = parse_word("t a[2] c[1]")
    out = mckinsey_search(g, g, D_TABLE)
    assert out.verdict == "conjugate"
    assert out.conjugator_word == ""
    assert out.conjugators_tested == 1
    assert out.quotients_tested == 0


def test_mckinsey_shift_conjugate():
    g1 = GElement(generator_a(0))
    g2 = g_conj(g1, parse_word("t"))
    out = mckinsey_search(g1, g2, D_TABLE)
    assert out.verdict == "conjugate"
    assert out.conjugator_word == "t"
    assert out.conjugators_tested == 2
    assert out.quotients_tested == 16


def test_mckinsey_two_letter_conjugator():
    g1 = parse_word("t a[1] b[-1]")
    g2 = g_conj(g1, parse_word("b a"))
    out = mckinsey_search(g1, g2, D_TABLE, SearchBudget(max_conj_len=2))
    assert out.verdict == "conjugate"
    w = parse_word(out.conjugator_word)
    assert g_equal(g_conj(g1, w), g2, D_TABLE)


def test_mckinsey_separates_central_translate():
    g1 = parse_word("a[0]")
    g2 = parse_word("a[0] c[1]")
    out = mckinsey_search(g1, g2, D_TABLE)
    assert out.verdict == "non-conjugate"
    assert out.witness_order == 2048
    assert (out.witness_spec.index_modulus,
            out.witness_spec.exponent_modulus) == (2, 2)
    assert out.conjugators_tested == 1
    assert 1 <= out.quotients_tested <= 16
    assert not conjugacy_decide(g1, g2, D_TABLE).is_conjugate


def test_mckinsey_separates_twist_mismatch():
    out = mckinsey_search(parse_word("t"), parse_word("t t"), D_TABLE)
    assert out.verdict == "non-conjugate"
    assert out.witness_order == 2048


def test_mckinsey_large_witness_uses_exact_route():
    # under a constant d the smallest quotient keeping c_1 alive has
    # order 3 * 31^19, far beyond the exhaustive cap
    d = constant_prime(31)
    out = mckinsey_search(parse_word("a[0]"), parse_word("a[0] c[1]"), d,
                          SearchBudget(max_conj_len=1))
    assert out.verdict == "non-conjugate"
    assert out.witness_order == make_spec(3, 31, d).order()
    cert = conjugacy_decide(parse_word("a[0]"), parse_word("a[0] c[1]"), d)
    assert not cert.is_conjugate


def test_mckinsey_budget_exhausted():
    budget = SearchBudget(max_conj_len=1, max_order=10 ** 6)
    g1 = parse_word("a[0]")
    g2 = parse_word("a[0] c[2]")
    out = mckinsey_search(g1, g2, D_TABLE, budget)
    assert out.verdict == "budget-exhausted"
    assert out.conjugator_word is None and out.witness_spec is None
    assert out.conjugators_tested == 7
    assert out.quotients_tested == len(spec_stream(D_TABLE, budget))
    # the pair is separable in principle, just not within this budget
    assert not conjugacy_decide(g1, g2, D_TABLE).is_conjugate


def test_mckinsey_agrees_with_decision():
    rng = random.Random(97)
    budget = SearchBudget(max_conj_len=2, max_specs=20)
    for _ in range(25):
        g1 = letters_to_g(random_letters(rng, max_len=5,
                                         idx_range=(-2, 2), exp_range=(-2, 2)))
        conj_word = " ".join(rng.choice("tabTAB")
                             for _ in range(rng.randrange(0, 3)))
        g2 = g_conj(g1, parse_word(conj_word))
        out = mckinsey_search(g1, g2, D_TABLE, budget)
        assert out.verdict == "conjugate"
        w = parse_word(out.conjugator_word)
        assert g_equal(g_conj(g1, w), g2, D_TABLE)
        assert conjugacy_decide(g1, g2, D_TABLE).is_conjugate


# ------------------------------------------------------- witness growth

def test_rf_witness_orders():
    assert rf_witness_order(0, D_TABLE) == 2048
    assert rf_witness_order(1, D_TABLE) == make_spec(8, 31, D_TABLE).order()
    assert rf_witness_order(1, D_TABLE, SearchBudget(max_order=10 ** 6)) is None


def test_growth_table_rows():
    rows = growth_table(D_TABLE, range(4))
    assert [r.i for r in rows] == [0, 1, 2, 3]
    assert [r.word_length for r in rows] == [16, 24, 40, 72]
    expected = [
        2048,
        make_spec(8, 31, D_TABLE).order(),
        make_spec(16, 127, D_TABLE).order(),
        make_spec(32, 1021, D_TABLE).order(),
    ]
    assert [r.witness_order for r in rows] == expected
    assert all(r.decide_seconds >= 0 for r in rows)
    # anchor the witness identities: these quotients keep the relator
    # alive, the natural smaller candidates force it to die
    assert required_c_modulus(16, 4, 127, D_TABLE) == 127
    assert required_c_modulus(32, 8, 1021, D_TABLE) == 1021
    assert required_c_modulus(8, 4, 127, D_TABLE) == 1
    assert required_c_modulus(12, 4, 127, D_TABLE) == 1
    assert required_c_modulus(16, 8, 1021, D_TABLE) == 1
    assert required_c_modulus(24, 8, 1021, D_TABLE) == 1
