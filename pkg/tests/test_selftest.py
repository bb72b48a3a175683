import json

import pytest

from conicres.fields import fq_make
from conicres.selftest import (SUITES, Context, Discard, Property, get_property, properties, run_property,
                               run_suite, shrink)


def test_registry():
    names = [p.name for p in properties()]
    assert len(names) == len(set(names))
    assert {p.suite for p in properties()} == set(SUITES)
    assert get_property("main-lemma").suite == "lemma"
    with pytest.raises(ValueError):
        properties("nope")


@pytest.mark.parametrize("suite", SUITES)
def test_small_suites_pass(suite):
    summary = run_suite(suite, 5, trials=20, seed=3)
    assert summary.ok, [(r.name, r.counterexample, r.error) for r in summary.results if not r.ok]


def test_extension_field_lemma_suite():
    assert run_suite("lemma", 3, 2, trials=30).ok


def has_big_coeff(ctx, raw):
    # fails whenever some coefficient reaches 2 in a polynomial of degree >= 1
    cs = raw[0]
    return not (len(cs) >= 2 and max(cs) >= 2)


def gen_poly(rng, ctx):
    return [[rng.randrange(ctx.field.q) for _ in range(rng.randint(3, 7))]]


def test_shrinking_finds_minimal_counterexample():
    ctx = Context(fq_make(7))
    prop = Property("artificial", "symbols", gen_poly, has_big_coeff)
    result = run_property(prop, ctx, 50, seed=1)
    assert result.failed > 0 and not result.ok
    # degree first, then coefficients: the minimum is two coefficients, one of them equal to 2
    small = json.loads(result.counterexample)
    assert len(small[0]) == 2 and sorted(small[0]) == [0, 2]


def test_shrink_keeps_failing_and_respects_discards():
    ctx = Context(fq_make(5))

    def check(ctx, raw):
        if raw[0][0] == 0:
            raise Discard
        return raw[0][0] < 3

    prop = Property("artificial", "symbols", None, check)
    small = shrink(prop, ctx, [[4, 4, 4]])
    assert small == [[3]]


def test_exceptions_are_failures():
    def boom(ctx, raw):
        raise ZeroDivisionError("bad")

    prop = Property("boom", "symbols", gen_poly, boom)
    result = run_property(prop, Context(fq_make(3)), 5, seed=0)
    assert result.failed == 5 and "ZeroDivisionError" in result.error


def test_all_discarded_is_not_a_pass():
    def skip(ctx, raw):
        raise Discard

    result = run_property(Property("skip", "symbols", gen_poly, skip), Context(fq_make(3)), 5, seed=0)
    assert result.discarded == 5 and not result.ok


def test_json_is_deterministic_and_seed_sensitive():
    a = run_suite("cocycles", 7, trials=10, seed=9).dumps()
    b = run_suite("cocycles", 7, trials=10, seed=9).dumps()
    assert a == b
    assert '"seed": 9' in a
