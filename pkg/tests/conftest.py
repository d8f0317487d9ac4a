import hypothesis
import pytest

from cyquot.algebra.torus import NAMED_KERNELS, lattice_from_kernel, standard_lattice
from cyquot.services.classify_service import analyse_lattice, full_report

hypothesis.settings.register_profile("fast", max_examples=20)
hypothesis.settings.register_profile("ci", max_examples=200, deadline=None)
hypothesis.settings.register_profile("debugger", report_multiple_bugs=False)
hypothesis.settings.load_profile("ci")


@pytest.fixture(scope="session")
def lattices():
    return {name: lattice_from_kernel(kernel) for name, kernel in NAMED_KERNELS.items()}


@pytest.fixture(scope="session")
def standard():
    return standard_lattice()


@pytest.fixture(scope="session")
def heis_analysis():
    """Класи та 𝒩_ℂ для Λ₁, Λ₂"""
    return {name: analyse_lattice("heis3", NAMED_KERNELS[name]) for name in ("K3", "K4")}


@pytest.fixture(scope="session")
def z32_analysis():
    return {name: analyse_lattice("z3x2", NAMED_KERNELS[name]) for name in ("K1", "K2", "K3", "K4")}


@pytest.fixture(scope="session")
def report():
    return full_report(pin=False)
