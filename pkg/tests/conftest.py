import pytest

from twistlab import subgroup as sg
from twistlab.factorization import x1_canonical, x2_canonical


@pytest.fixture(scope="session")
def x2():
    return x2_canonical()


@pytest.fixture(scope="session")
def x1():
    return x1_canonical()


@pytest.fixture(scope="session")
def walk_certs():
    return sg.closure_walk()


@pytest.fixture(scope="session")
def scan0(x2):
    return sg.matching_path_scan(x2, 0)


@pytest.fixture(scope="session")
def scan1(x2):
    return sg.matching_path_scan(x2, 1)


@pytest.fixture(scope="session")
def phi_outcome():
    """derive_phi's certificate, or the CertificateError it raised."""
    try:
        return sg.derive_phi()
    except sg.CertificateError as exc:
        return exc
