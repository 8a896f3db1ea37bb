import pytest
from hypothesis import given
from hypothesis import strategies as st

from gorlab.algebra import CdgaPresentation, InvalidPresentation
from gorlab.expr import ParseError, parse_expression
from gorlab.parser import format_algebra, parse_algebra
from gorlab.presets import PRESETS, preset
from gorlab.sullivan import LambdaExtension


def test_sphere_model():
    R = parse_algebra("gen e : 3\nd e = 0\n")
    assert isinstance(R, CdgaPresentation)
    assert R.cohomology().dims.dims == {0: 1, 3: 1}


def test_example_preset_text():
    R = preset("example")
    assert R.names == ("u", "z", "x", "y")
    assert len(R.relations) == 5


def test_comments_and_rational_coefficients():
    R = parse_algebra("# c\ngen a : 2  # even\ngen b : 3\nd b = 3/2*a^2\n")
    assert R.cohomology().dims.dims == {0: 1, 2: 1}


@pytest.mark.parametrize(
    "text, line, col",
    [
        ("gen a : 2\nd a = a +\n", 2, 10),
        ("gen a : 2\nd b = a\n", 2, 3),
        ("gen x : 3\nd x = 0\nrel x^2\n", 3, 5),
        ("gen a : 2\nfoo a\n", 2, 1),
        ("gen a : 2\ngen a : 4\n", 2, 5),
        ("gen a 2\n", 1, 1),
        ("gen a : 2\nd a = 2*q\n", 2, 9),
    ],
)
def test_positioned_errors(text, line, col):
    with pytest.raises(ParseError) as err:
        parse_algebra(text)
    assert (err.value.line, err.value.col) == (line, col)


def test_odd_power_named():
    with pytest.raises(ParseError, match="odd generator 'x'"):
        parse_algebra("gen x : 3\ngen y : 6\nd y = x^2\n")


@pytest.mark.parametrize(
    "text, gen",
    [
        ("gen a : 2\ngen c : 5\nd c = a^3 + a\n", "c"),
        ("gen a : 2\ngen b : 3\ngen c : 5\nd b = a^2\nd c = a*b\n", "c"),
    ],
)
def test_semantic_errors_name_generator(text, gen):
    with pytest.raises(InvalidPresentation) as err:
        parse_algebra(text)
    assert gen in str(err.value)


def test_non_triangular_extension_rejected():
    text = "gen a : 2 block base\ngen x : 3 block fiber\ngen y : 3 block fiber\nd a = 0\nd x = y*a\nd y = x*a\n"
    with pytest.raises(InvalidPresentation):
        parse_algebra(text)


def test_missing_block_tag():
    with pytest.raises(InvalidPresentation, match="'b'"):
        parse_algebra("gen a : 3 block base\ngen b : 3\n")


@pytest.mark.parametrize("name", sorted(PRESETS))
def test_presets_round_trip(name):
    obj = preset(name)
    again = parse_algebra(format_algebra(obj))
    assert format_algebra(again) == format_algebra(obj)
    if isinstance(obj, LambdaExtension):
        assert again.total.signature() == obj.total.signature()
    else:
        assert again.signature() == obj.signature()


coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=4).filter(lambda q: q != 0)


def _signed(q):
    return f"- {-q}" if q < 0 else f"+ {q}"


@st.composite
def presentations(draw):
    # even generators a, c of degree 2, 4; odd b of degree 3 with d b in degree 4
    ca, cc = draw(coeffs), draw(coeffs)
    with_rel = draw(st.booleans())
    text = f"gen a : 2\ngen b : 3\ngen c : 4\nd a = 0\nd b = {ca}*a^2 {_signed(cc)}*c\nd c = 0\n"
    if with_rel:
        text += f"rel a^3 {_signed(draw(coeffs))}*a*c\n"
    return text


@given(presentations())
def test_round_trip_random(text):
    R = parse_algebra(text)
    S = parse_algebra(format_algebra(R))
    assert S.signature() == R.signature()
    assert format_algebra(S) == format_algebra(R)


def test_expression_terms():
    terms = parse_expression("-2*a^2 + 1/3*a*b - b", {"a", "b"})
    assert [(str(t.coeff), t.factors) for t in terms] == [("-2", (("a", 2),)), ("1/3", (("a", 1), ("b", 1))), ("-1", (("b", 1),))]
