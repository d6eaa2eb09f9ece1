import pytest

from orlicz_hardy.corpus import load_manifest
from orlicz_hardy.quadrature import QuadratureSpec


@pytest.fixture(scope="session")
def manifest():
    return load_manifest()


@pytest.fixture(scope="session")
def spec():
    return QuadratureSpec()


@pytest.fixture(scope="session")
def admissible_triples(manifest, spec):
    """(nf_label, u_label, n) -> ModularTriple for every finite combination."""
    from orlicz_hardy.functionals import modular_triple_radial

    out = {}
    for nf_label, nf in manifest.nfunctions.items():
        for u_label, u in manifest.radial_functions.items():
            for n in (1, 2, 3, 4, 5):
                tri = modular_triple_radial(u, nf, n, spec)
                if tri.valid:
                    out[(nf_label, u_label, n)] = tri
    return out
