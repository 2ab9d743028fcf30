from euciso import catalog
from euciso.dual import enumerate_dual, rep_set
from euciso.groups import build_quotient, find_m0, validate_spec


def test_every_entry_matches_its_expectations():
    for name, entry in catalog.CATALOG.items():
        s = entry.spec()
        assert validate_spec(s) == [], name
        exp = entry.expected
        report = find_m0(s)
        assert report.m0 == exp["m0"], name
        assert s.f_order == exp["f_order"], name
        assert s.rot_order == exp["rot_order"], name
        assert report.is_space_group == exp["is_space_group"], name
        for N, order in exp["orders"].items():
            assert build_quotient(s, N).order == order, (name, N)
        if "rep_set_size" in exp:
            assert len(rep_set(s).classes) == exp["rep_set_size"], name
        for N, frag in exp.get("dual", {}).items():
            atlas = enumerate_dual(s, N)
            assert len(atlas.labels) == frag["labels"], name
            irr = sum(1 for r in atlas.labels if r.irreducible)
            assert irr == frag["irreducible"], name
            assert atlas.census_dims == frag["census_dims"], name


def test_catalog_lookup_errors():
    import pytest
    with pytest.raises(KeyError):
        catalog.get("no-such-group")
