"""Session-scoped fixtures: catalog entries and chord searches are built
once and shared, since the searches dominate suite runtime."""

import pytest

from reebkit import catalog_get, chords_projection, chords_shooting, primitive
from reebkit.chords import SearchOptions

SHEAR_SWEEP = (-0.5, -0.25, 0.0, 0.25, 0.5)


@pytest.fixture(scope="session")
def unknot_entry():
    return catalog_get("unknot")


@pytest.fixture(scope="session")
def circle_entry():
    return catalog_get("circle")


@pytest.fixture(scope="session")
def torus_entry():
    return catalog_get("torus_r5")


@pytest.fixture(scope="session")
def warped_entry():
    return catalog_get("warped_torus")


@pytest.fixture(scope="session")
def vertical_entry():
    return catalog_get("vertical_segment")


@pytest.fixture(scope="session")
def hopf_entry():
    return catalog_get("hopf_circle")


@pytest.fixture(scope="session")
def sheared_entries():
    return {c: catalog_get("sheared_unknot", {"c": c}) for c in SHEAR_SWEEP if c != 0.0}


@pytest.fixture(scope="session")
def sheared_01_entry():
    return catalog_get("sheared_unknot", {"c": 0.1})


@pytest.fixture(scope="session")
def projection_chords(unknot_entry, circle_entry, torus_entry, sheared_entries, sheared_01_entry):
    opts = SearchOptions(max_time=3.0)
    out = {
        "unknot": chords_projection(unknot_entry.model, unknot_entry.slice, opts),
        "circle": chords_projection(circle_entry.model, circle_entry.slice, opts),
        "torus_r5": chords_projection(torus_entry.model, torus_entry.slice, opts),
        ("sheared_unknot", 0.1): chords_projection(sheared_01_entry.model, sheared_01_entry.slice, opts),
    }
    for c, entry in sheared_entries.items():
        out[("sheared_unknot", c)] = chords_projection(entry.model, entry.slice, opts)
    return out


@pytest.fixture(scope="session")
def shooting_chords(unknot_entry, circle_entry, torus_entry, sheared_entries, hopf_entry):
    out = {
        "unknot": chords_shooting(unknot_entry.model, unknot_entry.slice, SearchOptions(max_time=3.0)),
        "circle": chords_shooting(circle_entry.model, circle_entry.slice, SearchOptions(max_time=10.0)),
        "torus_r5": chords_shooting(torus_entry.model, torus_entry.slice, SearchOptions(max_time=3.0, launch_stride=128)),
        "hopf_circle": chords_shooting(hopf_entry.model, hopf_entry.slice, SearchOptions(max_time=2.0, launch_stride=4)),
    }
    for c, entry in sheared_entries.items():
        out[("sheared_unknot", c)] = chords_shooting(entry.model, entry.slice, SearchOptions(max_time=3.0))
    return out


@pytest.fixture(scope="session")
def primitives(unknot_entry, sheared_entries, sheared_01_entry, hopf_entry):
    out = {
        "unknot": primitive(unknot_entry.model, unknot_entry.slice),
        ("sheared_unknot", 0.1): primitive(sheared_01_entry.model, sheared_01_entry.slice),
        "hopf_circle": primitive(hopf_entry.model, hopf_entry.slice),
    }
    for c, entry in sheared_entries.items():
        out[("sheared_unknot", c)] = primitive(entry.model, entry.slice)
    return out


@pytest.fixture(scope="session")
def collar_reports(
    unknot_entry,
    circle_entry,
    torus_entry,
    vertical_entry,
    warped_entry,
    hopf_entry,
    sheared_entries,
    sheared_01_entry,
):
    from reebkit.collar import CollarOptions, Convention, collar_report

    def opts(max_time=3.0, convention=Convention.DIRECT, stride=2):
        return CollarOptions(
            convention=convention,
            search=SearchOptions(max_time=max_time, launch_stride=stride),
        )

    out = {
        "unknot": collar_report(unknot_entry.model, unknot_entry.slice, opts()),
        "circle": collar_report(circle_entry.model, circle_entry.slice, opts(max_time=10.0)),
        "torus_r5": collar_report(torus_entry.model, torus_entry.slice, opts()),
        "vertical_segment": collar_report(vertical_entry.model, vertical_entry.slice, opts()),
        "warped_torus": collar_report(warped_entry.model, warped_entry.slice, opts()),
        "hopf_circle": collar_report(hopf_entry.model, hopf_entry.slice, opts(max_time=2.0, stride=4)),
        ("sheared_unknot", 0.1): collar_report(sheared_01_entry.model, sheared_01_entry.slice, opts()),
    }
    for c, entry in sheared_entries.items():
        out[("sheared_unknot", c)] = collar_report(entry.model, entry.slice, opts())
    out[("sheared_unknot", -0.5, "feasibility")] = collar_report(
        sheared_entries[-0.5].model,
        sheared_entries[-0.5].slice,
        opts(convention=Convention.FEASIBILITY),
    )
    return out
