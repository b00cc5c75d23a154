import pytest
from hypothesis import given
from hypothesis import strategies as st

from cyclicfact.errors import SpecParseError, ValidationError
from cyclicfact.families import Family, Gamma2, GroupSpec, parse_spec


@pytest.mark.parametrize("text", [
    "cyclic:12", "abelian:3^1,3^2", "dihedral:5", "quaternion:4", "semidihedral:5",
    "modular:3,4", "dicyclic:6", "gendicyclic:8,ahalfb", "symmetric:4", "alternating:5",
    "product:(symmetric:3)*(cyclic:2)", "product:(cyclic:2)*(cyclic:3)*(product:(cyclic:5)*(cyclic:7))",
])
def test_round_trip(text):
    assert str(parse_spec(text)) == text


def test_structure():
    s = parse_spec("gendicyclic:6,b")
    assert s.family is Family.GEN_DICYCLIC and s.params == (6,) and s.gamma2_choice is Gamma2.B
    p = parse_spec("product:(dihedral:3)*(cyclic:5)")
    assert p.family is Family.PRODUCT and [f.family for f in p.factors] == [Family.DIHEDRAL, Family.CYCLIC]
    assert parse_spec("abelian:2^1,3^2").params == (2, 1, 3, 2)


@pytest.mark.parametrize("text,position,expected", [
    ("", 0, "a family name"),
    ("dihedral:x", 9, "an integer"),
    ("foo:3", 0, "one of"),
    ("dihedral3", 8, "':'"),
    ("dihedral:3x", 10, "end of input"),
    ("modular:3", 9, "','"),
    ("abelian:2^1,", 12, "an integer"),
    ("abelian:2", 9, "'^'"),
    ("gendicyclic:4,c", 14, "one of ahalf"),
    ("product:(cyclic:2)", 18, "second factor"),
    ("product:cyclic:2", 8, "'('"),
    ("product:(cyclic:2)*(cyclic:3", 28, "')'"),
    ("dihedral: 3", 9, "an integer"),
])
def test_errors_report_position(text, position, expected):
    with pytest.raises(SpecParseError) as info:
        parse_spec(text)
    err = info.value
    assert err.position == position
    assert expected in err.expected
    assert f"position {position}" in str(err)
    assert isinstance(err, ValidationError)


_simple = st.one_of(
    st.builds(lambda n: f"cyclic:{n}", st.integers(1, 999)),
    st.builds(lambda n: f"dihedral:{n}", st.integers(3, 999)),
    st.builds(lambda p, n: f"modular:{p},{n}", st.sampled_from([2, 3, 5, 7]), st.integers(3, 9)),
    st.builds(lambda n, c: f"gendicyclic:{n},{c.value}", st.integers(1, 50), st.sampled_from(list(Gamma2))),
    st.builds(
        lambda ps: "abelian:" + ",".join(f"{p}^{a}" for p, a in ps),
        st.lists(st.tuples(st.sampled_from([2, 3, 5]), st.integers(1, 4)), min_size=1, max_size=4),
    ),
)
_specs = st.recursive(
    _simple,
    lambda inner: st.builds(lambda fs: "product:" + "*".join(f"({f})" for f in fs),
                            st.lists(inner, min_size=2, max_size=3)),
    max_leaves=6,
)


@given(_specs)
def test_round_trip_property(text):
    spec = parse_spec(text)
    assert isinstance(spec, GroupSpec)
    assert str(spec) == text
    assert parse_spec(str(spec)) == spec


@given(_specs, st.integers(0, 200), st.sampled_from(list(" #)(:,^*")))
def test_corruption_never_crashes(text, where, junk):
    where = where % (len(text) + 1)
    bad = text[:where] + junk + text[where:]
    try:
        parse_spec(bad)
    except SpecParseError as err:
        assert 0 <= err.position <= len(bad)
