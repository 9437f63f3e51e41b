import numpy as np
import pytest

from sswalk.expressions import Expression, ExpressionError, compile_xt, parse_complex


def test_arithmetic_and_functions():
    e = Expression("0.5 * acos(x + 5 * a)", variables=("x", "a"))
    assert e(x=0.0, a=0.004) == pytest.approx(0.5 * np.arccos(0.02))
    e2 = Expression("1000 * x * t", variables=("x", "t"))
    assert e2(x=0.25, t=2.0) == 500.0
    e3 = Expression("sin(pi / 2) + ln(e)", variables=())
    assert e3() == pytest.approx(2.0)
    assert Expression("pow(2, 10)", variables=())() == 1024
    assert Expression("sec(0)", variables=())() == pytest.approx(1.0)


def test_vectorized_field_compilation():
    fn = compile_xt("cos(4 * x) / t", a=0.01)
    x = np.linspace(-1, 1, 11)
    assert np.allclose(fn(x, 2.0), np.cos(4 * x) / 2.0)
    assert np.shape(fn(x, 2.0)) == x.shape
    const = compile_xt("0.04", a=0.01)
    assert np.allclose(const(x, 0.0), 0.04)


def test_unknown_names_rejected():
    with pytest.raises(ExpressionError, match="unknown name"):
        Expression("y + 1", variables=("x",))
    with pytest.raises(ExpressionError, match="unknown function"):
        Expression("system('ls')", variables=())
    with pytest.raises(ExpressionError):
        Expression("__import__('os')", variables=())


def test_unsupported_syntax_rejected():
    for bad in ("x if t else 0", "lambda: 1", "[1, 2]", "x.real", "f'{x}'"):
        with pytest.raises(ExpressionError):
            Expression(bad, variables=("x", "t"))
    with pytest.raises(ExpressionError, match="parse"):
        Expression("1 +", variables=())


def test_parse_complex():
    assert parse_complex("1j / sqrt(2)") == pytest.approx(1j / np.sqrt(2))
    assert parse_complex("(1 + 0j) / sqrt(2)") == pytest.approx(1 / np.sqrt(2))
    assert parse_complex("-0.6") == -0.6
    with pytest.raises(ExpressionError):
        parse_complex("x")
