import pytest

import casimir_media


def test_version():
    assert hasattr(casimir_media, "__version__")
    assert casimir_media.__version__ == "0.1.0"


def test_public_api():
    for name in ("make_species", "pair_potential", "slab_force", "ThermalContext", "CasimirError"):
        assert hasattr(casimir_media, name)
