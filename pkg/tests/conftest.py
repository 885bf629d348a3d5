import pytest

from rabispec import rabi, refdata


@pytest.fixture(scope="session")
def reference():
    return refdata.reference_sets()


@pytest.fixture(scope="session")
def solved_sets(reference):
    """Spectrum and labels at the default truncation for every bundled set."""
    out = {}
    for set_id, ref in reference.items():
        spec = rabi.solve(ref.params, 40)
        labels = rabi.assign_labels(spec, ref.params)
        out[set_id] = (ref, spec, labels)
    return out
