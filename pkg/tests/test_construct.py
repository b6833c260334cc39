import pytest
from pydantic import ValidationError

from qsdesign.codes import (
    LinearCode,
    extremal_bound,
    is_doubly_even,
    is_self_dual,
    minimum_weight,
    weight_enumerator,
)
from qsdesign.construct import (
    WalkConfig,
    direct_sum,
    embed_doubly_even_self_dual,
    load_code,
    load_code_directory,
    neighbor,
    sample_codes,
    sample_extremal_40,
    save_code,
    save_code_directory,
    seed_code,
)
from qsdesign.errors import (
    CodeParseError,
    DegenerateNeighborError,
    NoSelfDualCodeError,
    PreconditionError,
    UnknownSeedError,
)
from qsdesign.f2core import BitMatrix, BitVector


def test_seed_codes():
    e8 = seed_code("e8")
    assert (e8.length, e8.dimension, minimum_weight(e8)) == (8, 4, 4)
    e8_5 = seed_code("e8_5")
    assert e8_5.length == 40 and e8_5.dimension == 20
    assert is_doubly_even(e8_5) and is_self_dual(e8_5)
    assert minimum_weight(e8_5) == 4
    assert weight_enumerator(seed_code("e8_3"))[4] == 42


@pytest.mark.parametrize("name", ["golay", "e8_0", "e7"])
def test_unknown_seed(name):
    with pytest.raises(UnknownSeedError):
        seed_code(name)


def test_direct_sum_places_first_code_lowest(e8):
    two = direct_sum([e8, e8])
    assert two.length == 16
    assert 0xFF in two and 0xFF00 in two


def test_embed_fixed_point(e8):
    assert embed_doubly_even_self_dual(e8) == e8


@pytest.mark.parametrize(
    "rows", [["11110000", "00111100"], []],
)
def test_embed_reaches_self_dual(rows):
    code = LinearCode.from_rows(8, rows) if rows else LinearCode.zero(8)
    d = embed_doubly_even_self_dual(code)
    assert is_self_dual(d) and is_doubly_even(d)
    assert weight_enumerator(d) == [1, 0, 0, 0, 14, 0, 0, 0, 1]
    assert all(r in d for r in code.rows)


def test_embed_errors():
    with pytest.raises(NoSelfDualCodeError):
        embed_doubly_even_self_dual(LinearCode.zero(12))
    with pytest.raises(PreconditionError):
        embed_doubly_even_self_dual(LinearCode.from_rows(8, ["11000000"]))


def test_embed_length_16_code():
    c = LinearCode.from_rows(16, ["1111000000000000", "0000000011110000"])
    d = embed_doubly_even_self_dual(c)
    assert d.dimension == 8 and is_doubly_even(d)
    assert all(r in d for r in c.rows)


def test_neighbor_errors(e8):
    with pytest.raises(DegenerateNeighborError):
        neighbor(e8, BitVector.from_string("11110000"))
    with pytest.raises(PreconditionError):
        neighbor(e8, BitVector.from_string("11000000"))


def test_neighbor_step():
    c = seed_code("e8_2")
    v = BitVector.from_string("1100000011000000")
    n = neighbor(c, v)
    assert n.dimension == 8
    assert is_self_dual(n) and is_doubly_even(n)
    assert v in n
    joint = LinearCode(16, BitMatrix(16, c.rows + n.rows))
    shared = c.dimension + n.dimension - joint.dimension
    assert shared >= 7


def test_walk_config_validation():
    with pytest.raises(ValidationError):
        WalkConfig(target_length=36)
    with pytest.raises(ValidationError):
        WalkConfig(steps=0)
    assert WalkConfig().min_weight == 8
    assert WalkConfig(target_length=16).min_weight == 4


def test_sample_codes_is_deterministic():
    config = WalkConfig(seed=7, steps=6, target_length=16, count=3)
    first = sample_codes(config)
    second = sample_codes(config)
    assert first == second
    assert 1 <= len(first) <= 3
    for code in first:
        assert code.length == 16 and is_self_dual(code) and is_doubly_even(code)
    assert len({code.basis for code in first}) == len(first)


def test_sample_length_24():
    codes = sample_codes(WalkConfig(seed=3, steps=10, target_length=24, target_min_weight=4, count=4))
    assert codes
    assert all(c.length == 24 and is_self_dual(c) and is_doubly_even(c) for c in codes)


def test_sample_extremal_40_needs_length_40():
    with pytest.raises(PreconditionError):
        sample_extremal_40(WalkConfig(target_length=24))


@pytest.mark.slow
def test_sampled_extremal_codes(extremal_codes):
    assert len(extremal_codes) >= 25
    for code in extremal_codes:
        assert is_self_dual(code) and is_doubly_even(code)
        assert minimum_weight(code) == 8 == extremal_bound(40)
        a = weight_enumerator(code)
        assert a[8] == 285
        assert a[12] == 21280
        assert a[16] == 239970
        assert a[20] == 525504
        assert a == a[::-1]


def test_save_load_round_trip(tmp_path, e8):
    path = tmp_path / "e8.txt"
    save_code(e8, path)
    assert load_code(path) == e8


@pytest.mark.parametrize("name", ["short_row.txt", "k_gt_n.txt"])
def test_load_malformed(fixtures_dir, name):
    with pytest.raises(CodeParseError) as excinfo:
        load_code(fixtures_dir / name)
    assert name in str(excinfo.value)


def test_code_directory(tmp_path, e8):
    codes = [e8, seed_code("e8_2")]
    paths = save_code_directory(codes, tmp_path)
    assert [p.name for p in paths] == ["00000.txt", "00001.txt"]
    (tmp_path / "00002.txt").write_text("8 1\n1111\n", encoding="utf-8")
    loaded, failures = load_code_directory(tmp_path)
    assert [(code_id, code) for code_id, code in loaded] == [("00000", e8), ("00001", codes[1])]
    assert [name for name, _ in failures] == ["00002.txt"]
