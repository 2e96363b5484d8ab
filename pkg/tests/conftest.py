import pytest

from tsconformable import (
    ConformableContext,
    build_timescale,
    interval,
    make_kernel,
    point,
)


@pytest.fixture
def z_window():
    """Integer window {0, ..., 8}."""
    return build_timescale([point(float(k)) for k in range(9)], label="Z{0..8}")


@pytest.fixture
def z18():
    """Integer window {1, ..., 8} (safe for |t| kernels)."""
    return build_timescale([point(float(k)) for k in range(1, 9)], label="Z{1..8}")


@pytest.fixture
def r_window():
    """Real window [0, 1]."""
    return build_timescale([interval(0.0, 1.0)], label="R[0,1]")


@pytest.fixture
def hybrid():
    """{0} u [1, 2] u {3}."""
    return build_timescale([point(0.0), interval(1.0, 2.0), point(3.0)])


@pytest.fixture
def ctx_pw(z_window):
    """power_omega(1), alpha = 0.5 on the integer window."""
    return ConformableContext(z_window, make_kernel("power_omega", 0.5, omega=1.0))


@pytest.fixture
def ctx_pw08(z_window):
    """power_omega(1), alpha = 0.8 on the integer window."""
    return ConformableContext(z_window, make_kernel("power_omega", 0.8, omega=1.0))
