import numpy as np
import pytest
from hypothesis import given, strategies as st

from spinqst import (
    CouplingPattern,
    EndCouplings,
    lambda_closed_form,
    make_random_paired,
    make_staggered,
    make_uniform,
    read_pattern_csv,
    validate,
    write_pattern_csv,
)
from spinqst.errors import (
    CouplingRangeError,
    DomainError,
    InvalidLengthError,
    NonPositiveCouplingError,
    UnsupportedConfigurationError,
    ValidationError,
)


def test_uniform():
    assert make_uniform(4).couplings == (1.0, 1.0, 1.0)
    assert make_uniform(2).couplings == (1.0,)
    p = make_uniform(30)
    assert len(p) == 29 and set(p) == {1.0}
    assert p.N == 30 and p.M == 15


@pytest.mark.parametrize("N", [0, -2, 3, 5, 2.5])
def test_uniform_rejects_bad_length(N):
    with pytest.raises(InvalidLengthError):
        make_uniform(N)


def test_staggered_phases():
    assert make_staggered(4, 0.5, "weak-first").couplings == (0.5, 1.0, 0.5)
    assert make_staggered(4, 0.5, "strong-first").couplings == (1.0, 0.5, 1.0)
    for phase in ("weak-first", "strong-first"):
        assert make_staggered(4, 1.0, phase) == make_uniform(4)


@pytest.mark.parametrize("b", [0.0, -0.1, 1.01])
def test_staggered_rejects_b(b):
    with pytest.raises(DomainError):
        make_staggered(6, b)


@pytest.mark.parametrize("M", [1, 3, 5, 7, 15])
@pytest.mark.parametrize("b", [0.3, 0.5, 0.9])
def test_staggered_lambda_scaling(M, b):
    N = 2 * M
    strong = lambda_closed_form(make_staggered(N, b, "strong-first"))
    weak = lambda_closed_form(make_staggered(N, b, "weak-first"))
    assert abs(strong) == pytest.approx(b ** (M - 1), rel=1e-13)
    assert abs(weak) == pytest.approx(b ** (-M), rel=1e-13)


def test_random_paired_zero_width():
    assert make_random_paired(30, 0.0, 5) == make_uniform(30)


@pytest.mark.parametrize("seed", range(5))
def test_random_paired_structure(seed):
    p = make_random_paired(30, 0.5, seed)
    J = p.as_array()
    assert J.size == 29
    assert np.all((J >= 0.5) & (J <= 1.0))
    assert p.coupling(15) == 1.0
    for i in list(range(1, 14, 2)) + list(range(16, 29, 2)):
        assert p.coupling(i) == p.coupling(i + 1)


def test_random_paired_deterministic():
    assert make_random_paired(30, 0.99, 7) == make_random_paired(30, 0.99, 7)
    assert make_random_paired(30, 0.99, 7) != make_random_paired(30, 0.99, 8)
    assert make_random_paired(30, 0.5, 7, stream=(3,)) == make_random_paired(30, 0.5, 7, stream=(3,))
    assert make_random_paired(30, 0.5, 7, stream=(3,)) != make_random_paired(30, 0.5, 7, stream=(4,))


def test_random_paired_errors():
    with pytest.raises(DomainError):
        make_random_paired(30, 1.0, 0)
    with pytest.raises(DomainError):
        make_random_paired(30, -0.1, 0)
    with pytest.raises(UnsupportedConfigurationError):
        make_random_paired(28, 0.5, 0)


@given(
    M=st.sampled_from([1, 3, 5, 7, 9, 15, 25, 49]),
    W=st.floats(0.0, 0.99),
    seed=st.integers(0, 2**32),
)
def test_random_paired_lambda_is_one(M, W, seed):
    assert abs(lambda_closed_form(make_random_paired(2 * M, W, seed)) - 1.0) <= 1e-12


def test_validate():
    assert validate((1, 1, 1)).couplings == (1.0, 1.0, 1.0)
    p = make_uniform(4)
    assert validate(p) is p
    with pytest.raises(NonPositiveCouplingError):
        validate((1, 0, 1))
    with pytest.raises(NonPositiveCouplingError):
        validate((1, float("nan"), 1))
    with pytest.raises(InvalidLengthError):
        validate((1, 1))
    with pytest.raises(InvalidLengthError):
        validate(())
    with pytest.raises(CouplingRangeError):
        validate((1, 1.5, 1))
    assert issubclass(CouplingRangeError, ValidationError)


def test_end_couplings():
    ends = EndCouplings.symmetric(0.01)
    assert ends.a_S == ends.a_R == 0.01 and ends.is_symmetric
    assert ends.perturbative(30)
    assert not EndCouplings(0.01, 0.5).perturbative(30)
    with pytest.raises(DomainError):
        EndCouplings(0.0, 0.1)


def test_pattern_csv_roundtrip(tmp_path):
    p = make_random_paired(30, 0.5, 3)
    path = write_pattern_csv(p, tmp_path / "p.csv")
    lines = path.read_text().splitlines()
    assert lines[0] == ",".join(f"J_{i}" for i in range(1, 30))
    assert read_pattern_csv(path) == p


def test_pattern_csv_bad_header(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("a,b,c\n1,1,1\n")
    with pytest.raises(ValidationError):
        read_pattern_csv(path)


def test_immutable():
    p = make_uniform(4)
    with pytest.raises(AttributeError):
        p.couplings = (0.5,)
    assert isinstance(p, CouplingPattern)
