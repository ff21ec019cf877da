from fractions import Fraction

from hypothesis import settings, strategies as st

from qop.field import cyclo_field

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

ORDERS = (6, 10, 14, 20)

small_fracs = st.fractions(min_value=-20, max_value=20, max_denominator=12)


@st.composite
def cyclo_elements(draw, n=None, nonzero=False):
    n = draw(st.sampled_from(ORDERS)) if n is None else n
    K = cyclo_field(n)
    coeffs = draw(st.lists(small_fracs, min_size=K.degree, max_size=K.degree))
    x = K.element(coeffs)
    if nonzero and x.is_zero():
        x = K.one
    return x


@st.composite
def field_polys(draw, n, max_degree=8, var="z"):
    from qop.poly import FieldPoly

    K = cyclo_field(n)
    deg = draw(st.integers(0, max_degree))
    coeffs = [draw(cyclo_elements(n=n)) for _ in range(deg + 1)]
    return FieldPoly(K, coeffs, var)


def frac(s):
    return Fraction(s)
