import random
from fractions import Fraction

import pytest

from krawpv.maps import (
    BRIDGE_RENAMES,
    CASCADES,
    DECOMPOSITIONS,
    INDETERMINACY_POINTS,
    PUSHFORWARD_TRIPLES,
    MapError,
    apply_map,
    compose_maps,
    get_map,
    pushforward_check,
    verify_bridge_rename,
    verify_cascade,
    verify_decomposition,
    verify_indeterminacy,
    verify_inverse,
)
from krawpv.sampling import Sampler


def sampler(seed):
    return Sampler(random.Random(seed))


def test_unknown_map_id():
    with pytest.raises(MapError):
        get_map("nope")


def test_apply_map_simple_point():
    m = get_map("phi11")
    env = {"u11": Fraction(2), "v11": Fraction(3), "t": Fraction(1),
           "n": Fraction(1), "N": Fraction(2), "alpha": Fraction(0)}
    out = apply_map(m, env)
    assert set(out) == {"q", "p"}


def test_compose_two_maps_is_substitution():
    comp = compose_maps([get_map("phi_qP"), get_map("phi41_hat")])
    assert tuple(comp.source_coords) == ("q", "p")
    assert tuple(comp.target_coords) == ("U41", "V41")


@pytest.mark.parametrize("triple", PUSHFORWARD_TRIPLES, ids=lambda t: "-".join(t))
def test_pushforward(triple):
    src, mid, tgt = triple
    case = pushforward_check(src, mid, tgt, sampler(f"pf:{mid}"), samples=20)
    assert case.passed, case.failures[:3]


def test_pushforward_mismatched_triple_fails_not_raises():
    case = pushforward_check("original", "phi11_hat", "UV21", sampler("bad"))
    assert case.status == "FAIL"


def test_swapped_center_variant_fails_pushforward():
    case = pushforward_check(
        "original_QP", "Phi54_tswap", "uv54", sampler("tswap"), samples=10
    )
    assert case.status == "FAIL"


def test_printed_reciprocal_variant_fails_pushforward():
    case = pushforward_check(
        "uv510b", "psi11_hat_printed", "UV11", sampler("printed"), samples=10
    )
    assert case.status == "FAIL"


@pytest.mark.parametrize("map_id", ["Phi54", "Phi54b", "Phi510b"])
def test_inverses_round_trip(map_id):
    case = verify_inverse(map_id, sampler(f"inv:{map_id}"), samples=20)
    assert case.passed, case.failures[:3]


@pytest.mark.parametrize("cascade_id", sorted(CASCADES))
def test_cascades_match_closed_forms(cascade_id):
    case = verify_cascade(cascade_id, sampler(f"casc:{cascade_id}"), samples=20)
    assert case.passed, case.failures[:3]


@pytest.mark.parametrize("name", sorted(DECOMPOSITIONS))
def test_decompositions(name):
    case = verify_decomposition(name, sampler(f"dec:{name}"), samples=20)
    assert case.passed, case.failures[:3]


@pytest.mark.parametrize("name", sorted(BRIDGE_RENAMES))
def test_bridge_renames(name):
    case = verify_bridge_rename(name, sampler(f"br:{name}"), samples=20)
    assert case.passed, case.failures[:3]


@pytest.mark.parametrize("point", INDETERMINACY_POINTS, ids=lambda p: p.id)
def test_indeterminacy_points(point):
    case = verify_indeterminacy(point, sampler(f"ind:{point.id}"), samples=20)
    assert case.passed, case.failures[:3]
