"""Class records, orbit averages, acceptability, the GL_n polygon helper."""

from fractions import Fraction

import pytest

from wqbg.cartan import Coweight, build_root_system
from wqbg.coxeter import Automorphism, get_group, identity_automorphism
from wqbg.newton import (
    SigmaConjClass,
    basic_class,
    gln_classes,
    gln_classes_bruteforce,
    is_neutrally_acceptable,
    make_class,
    mazur_margin,
    mu_diamond,
    sigma_on_coweight,
)


def test_mu_diamond():
    a2 = get_group("A2")
    flip = Automorphism(a2, (1, 0))
    mu = a2.rs.coweight([2, 0], basis="fundamental")
    md = mu_diamond(a2.rs, mu, flip)
    assert md.coords == a2.rs.coweight([1, 1], basis="fundamental").coords
    assert mu_diamond(a2.rs, mu, identity_automorphism(a2)).coords == mu.coords

    aa = get_group("A1xA1")
    swap = Automorphism(aa, (1, 0))
    for m in (4, 7):
        md = mu_diamond(aa.rs, aa.rs.coweight([m, 0]), swap)
        assert md.coords == (Fraction(m, 2), Fraction(m, 2))


def test_mu_diamond_is_sigma_fixed_and_maximal():
    a2 = get_group("A2")
    flip = Automorphism(a2, (1, 0))
    rs = a2.rs
    mu = rs.coweight([3, 1])
    md = mu_diamond(rs, mu, flip)
    assert sigma_on_coweight(rs, flip, md).coords == md.coords
    # dominance-maximal among sigma-orbit averages of Weyl translates
    for w in rs.weyl_orbit(mu):
        avg = mu_diamond(rs, w, flip)
        assert rs.dominance_leq(avg, md)


def test_neutrally_acceptable():
    a1 = get_group("A1")
    mu = a1.rs.coweight([6])
    b = basic_class(a1.rs, mu)
    assert is_neutrally_acceptable(a1.rs, b, mu, identity_automorphism(a1))

    gl2 = build_root_system("GL2")
    gl2_group = get_group("GL2")
    sid = identity_automorphism(gl2_group)
    mu10 = gl2.coweight([1, 0], basis="lattice")
    assert is_neutrally_acceptable(
        gl2, make_class(gl2, (Fraction(1, 2), Fraction(1, 2)), 1, kappa=(1,)), mu10, sid
    )
    assert is_neutrally_acceptable(gl2, make_class(gl2, (1, 0), 0), mu10, sid)
    # kappa mismatch
    assert not is_neutrally_acceptable(gl2, make_class(gl2, (0, 0), 0), mu10, sid)
    # dominance failure: (2,-1) is dominant but not below (1,0)
    assert not is_neutrally_acceptable(gl2, make_class(gl2, (2, -1), 0), mu10, sid)
    # non-dominant Newton points are rejected outright
    with pytest.raises(ValueError):
        make_class(gl2, (-1, 2), 0)


def test_mazur_margin():
    a1 = get_group("A1")
    sid = identity_automorphism(a1)
    mu6 = a1.rs.coweight([6])
    assert mazur_margin(a1.rs, basic_class(a1.rs, mu6), mu6, sid)
    # 2 rho^vee = alpha^vee in A1: mu = alpha^vee sits exactly on the margin
    mu1 = a1.rs.coweight([1])
    assert mazur_margin(a1.rs, basic_class(a1.rs, mu1), mu1, sid)
    # and a strictly smaller mu fails
    mu0 = a1.rs.coweight([0])
    assert not mazur_margin(a1.rs, basic_class(a1.rs, mu0), mu0, sid)

    gl2 = build_root_system("GL2")
    gl2_group = get_group("GL2")
    mu = gl2.coweight([14, 0], basis="lattice")
    b = make_class(gl2, (7, 7), 1)
    assert mazur_margin(gl2, b, mu, identity_automorphism(gl2_group))


def test_gln_classes_counts_and_defects():
    # frozen from the two independent polygon enumerations below
    cls = gln_classes((1, 0))
    assert len(cls) == 2
    by_nu = {c.newton: c.defect for c in cls}
    assert by_nu[(1, 0)] == 0
    assert by_nu[(Fraction(1, 2), Fraction(1, 2))] == 1

    cls3 = gln_classes((1, 0, 0))
    assert {c.newton: c.defect for c in cls3}[
        (Fraction(1, 3),) * 3
    ] == 2
    assert len(cls3) == 3

    assert len(gln_classes((5,))) == 1 and gln_classes((5,))[0].defect == 0

    # GL4, mu = (1,1,0,0): five lattice polygons between mu and the line
    cls4 = gln_classes((1, 1, 0, 0))
    assert len(cls4) == 5
    nus = {c.newton for c in cls4}
    half = Fraction(1, 2)
    third = Fraction(1, 3)
    assert (1, 1, 0, 0) in nus
    assert (1, half, half, 0) in nus
    assert (half,) * 4 in nus
    assert (1, third, third, third) in nus
    assert (Fraction(2, 3),) * 3 + (0,) in nus
    # defect of nu = mu is 0; basic class defect matches the block rule
    by_nu = {c.newton: c.defect for c in cls4}
    assert by_nu[(1, 1, 0, 0)] == 0
    assert by_nu[(half,) * 4] == 2


@pytest.mark.parametrize("mu", [(1, 0), (1, 1, 0, 0), (2, 1, 0), (1, 0, 0, 0), (3, 1), (2, 0, -1)])
def test_gln_cross_enumeration(mu):
    got = sorted(c.newton for c in gln_classes(mu))
    expect = sorted(gln_classes_bruteforce(mu))
    assert got == expect


def test_gln_classes_all_acceptable():
    gl4 = build_root_system("GL4")
    gl4_group = get_group("GL4")
    sid = identity_automorphism(gl4_group)
    mu = gl4.coweight([1, 1, 0, 0], basis="lattice")
    for c in gln_classes((1, 1, 0, 0)):
        assert is_neutrally_acceptable(gl4, c, mu, sid)


def test_class_serialization():
    c = make_class(build_root_system("GL2"), (Fraction(1, 2), Fraction(1, 2)), 1, kappa=(1,))
    doc = c.to_json_dict()
    assert doc == {"kappa": [1], "nu": ["1/2", "1/2"], "defect": 1}
