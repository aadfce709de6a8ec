import dataclasses

import pytest

from breakglass.errors import DomainError, SchemaError
from breakglass.taxonomy import (
    AUTHORITY_ORDER,
    Architecture,
    AuthorityMode,
    DEFAULT_CALIBRATION,
    SCOPE_ORDER,
    ScopeLevel,
    default_design_space,
    load_calibration,
    patch_space,
    validate,
)


def test_design_space_has_15_distinct_cells():
    space = default_design_space()
    assert len(space) == 15
    assert len({arch.cell for arch in space}) == 15
    assert {arch.scope for arch in space} == set(ScopeLevel)
    assert {arch.authority for arch in space} == set(AuthorityMode)


def test_design_space_is_deterministic():
    assert default_design_space() == default_design_space()


def test_signer_set_cells_use_observed_median_time():
    for arch in default_design_space():
        if arch.authority is AuthorityMode.SIGNER_SET:
            assert arch.containment_time_min == 30.0


def test_network_governance_cell_takes_thirty_days():
    space = {a.cell: a for a in default_design_space()}
    gov_net = space[(ScopeLevel.NETWORK, AuthorityMode.GOVERNANCE)]
    assert gov_net.containment_time_min == 43200.0
    gov_sub = space[(ScopeLevel.PROTOCOL, AuthorityMode.GOVERNANCE)]
    assert gov_sub.containment_time_min == 4320.0


def test_calibration_is_monotone_in_authority_distribution():
    space = {a.cell: a for a in default_design_space()}
    for scope in SCOPE_ORDER:
        times = [space[(scope, a)].containment_time_min for a in AUTHORITY_ORDER]
        discounts = [space[(scope, a)].discount_rate for a in AUTHORITY_ORDER]
        assert times == sorted(times)
        assert discounts == sorted(discounts, reverse=True)


def test_validate_accepts_a_valid_architecture():
    arch = Architecture(
        scope=ScopeLevel.ACCOUNT,
        authority=AuthorityMode.SIGNER_SET,
        containment_time_min=30.0,
        discount_rate=0.025,
        scope_fraction=0.0001,
    )
    assert validate(arch) is arch


@pytest.mark.parametrize(
    "field,value",
    [
        ("scope_fraction", 1.2),
        ("scope_fraction", -0.1),
        ("containment_time_min", -5.0),
        ("discount_rate", -0.01),
    ],
)
def test_validate_names_the_offending_field(field, value):
    arch = dataclasses.replace(default_design_space()[0], **{field: value})
    with pytest.raises(DomainError) as excinfo:
        validate(arch)
    assert excinfo.value.field == field


def test_validate_rejects_nan_fields():
    arch = dataclasses.replace(default_design_space()[0], scope_fraction=float("nan"))
    with pytest.raises(DomainError):
        validate(arch)


def test_enum_parsing_and_ordering():
    assert ScopeLevel.parse(" Network ") is ScopeLevel.NETWORK
    assert AuthorityMode.parse("GOVERNANCE") is AuthorityMode.GOVERNANCE
    breadths = [s.breadth for s in SCOPE_ORDER]
    assert breadths == sorted(breadths, reverse=True)
    with pytest.raises(DomainError):
        ScopeLevel.parse("galaxy")
    with pytest.raises(DomainError):
        AuthorityMode.parse("monarchy")


def test_calibration_file_overrides_and_falls_back(tmp_path):
    cfg = tmp_path / "calibration.cfg"
    cfg.write_text(
        "# local overrides\n"
        "containment_time_min.signer_set = 12\n"
        "discount_rate.governance = 0.001\n"
        "scope_fraction.module = 0.03\n"
        "profile.audit_probability_scale.multiple = 0.2\n"
    )
    cal = load_calibration(cfg)
    space = {a.cell: a for a in cal.design_space()}
    assert space[(ScopeLevel.ASSET, AuthorityMode.SIGNER_SET)].containment_time_min == 12
    assert space[(ScopeLevel.ASSET, AuthorityMode.GOVERNANCE)].discount_rate == 0.001
    assert space[(ScopeLevel.MODULE, AuthorityMode.SIGNER_SET)].scope_fraction == 0.03
    assert cal.profile_tiers.audit_probability_scale["multiple"] == 0.2
    # Untouched keys keep the built-in values.
    assert space[(ScopeLevel.ASSET, AuthorityMode.DELEGATED_BODY)].containment_time_min == 75
    assert cal.version() != DEFAULT_CALIBRATION.version()
    assert cal.source == str(cfg)


def test_calibration_file_rejects_unknown_keys(tmp_path):
    cfg = tmp_path / "calibration.cfg"
    cfg.write_text("containment_time_min.signerset_typo = 12\n")
    with pytest.raises((SchemaError, DomainError)):
        load_calibration(cfg)
    cfg.write_text("not a key value line\n")
    with pytest.raises(SchemaError):
        load_calibration(cfg)
    cfg.write_text("scope_fraction.module = banana\n")
    with pytest.raises(SchemaError):
        load_calibration(cfg)


def test_patch_space_overrides_single_cells():
    space = default_design_space()
    patched = patch_space(
        space,
        [{"scope": "account", "authority": "governance", "containment_time_min": 99.0}],
    )
    by_cell = {a.cell: a for a in patched}
    assert by_cell[(ScopeLevel.ACCOUNT, AuthorityMode.GOVERNANCE)].containment_time_min == 99.0
    # Everything else untouched, order preserved.
    assert [a.cell for a in patched] == [a.cell for a in space]


def test_patch_space_rejects_duplicates_and_unknown_fields():
    space = default_design_space()
    patch = {"scope": "account", "authority": "governance", "containment_time_min": 9.0}
    with pytest.raises(DomainError):
        patch_space(space, [patch, patch])
    with pytest.raises(DomainError):
        patch_space(space, [{"scope": "account", "authority": "governance", "speed": 1}])


def test_annotated_rows_carry_provenance():
    rows = DEFAULT_CALIBRATION.annotated_rows()
    assert len(rows) == 15
    assert all("containment_time_note" in r and "discount_rate_note" in r for r in rows)
    gov_net = [r for r in rows if r["scope"] == "network" and r["authority"] == "governance"]
    assert "30 days" in gov_net[0]["containment_time_note"]
