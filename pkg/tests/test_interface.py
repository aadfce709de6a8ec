import json

import pytest
from click.testing import CliRunner
from fastapi.testclient import TestClient

from breakglass import reporting, scenario as scenario_mod
from breakglass.cli import main as cli_main
from breakglass.errors import SchemaError
from breakglass.service import create_app
from conftest import data_path


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app())


@pytest.fixture()
def runner():
    return CliRunner()


def canonical(obj) -> str:
    return reporting.canonical_json(obj)


def scenario_body() -> dict:
    return {"scenario": scenario_mod.load("fixture").to_dict()}


class TestScenarioDocument:
    def test_bundled_fixture_round_trips(self, fixture_scenario):
        doc = fixture_scenario.to_dict()
        again = scenario_mod.from_dict(doc)
        assert again.to_dict() == doc

    def test_round_trip_through_text(self, tmp_path, sweep_scenario):
        path = tmp_path / "scenario.json"
        scenario_mod.save(sweep_scenario, path)
        loaded = scenario_mod.load(path)
        assert loaded == sweep_scenario

    def test_missing_keys_are_schema_errors(self):
        with pytest.raises(SchemaError):
            scenario_mod.from_dict({"market": {}})
        with pytest.raises(SchemaError):
            scenario_mod.from_dict(
                {"threat": {"events": []}, "market": {"market_cap_usd": 1.0}}
            )

    def test_numbers_must_be_numbers(self):
        doc = scenario_mod.load("fixture").to_dict()
        doc["market"]["market_cap_usd"] = "1e9"
        with pytest.raises(SchemaError):
            scenario_mod.from_dict(doc)

    def test_invalid_values_are_domain_errors(self):
        from breakglass.errors import DomainError

        doc = scenario_mod.load("fixture").to_dict()
        doc["market"]["mean_sentiment"] = 1.5
        with pytest.raises(DomainError):
            scenario_mod.from_dict(doc)


class TestCli:
    def test_rank_json_equals_library_payload(self, runner, fixture_scenario):
        result = runner.invoke(cli_main, ["rank", "--scenario", "fixture",
                                          "--format", "json"])
        assert result.exit_code == 0
        expected = canonical(reporting.rank_payload(fixture_scenario))
        assert result.output.strip() == expected

    def test_rank_table_lists_all_cells(self, runner):
        result = runner.invoke(cli_main, ["rank", "--scenario", "fixture"])
        assert result.exit_code == 0
        body = [l for l in result.output.splitlines() if l and not l.startswith(("rank", "-"))]
        assert len(body) == 15
        assert body[0].split()[1:3] == ["account", "delegated_body"]

    def test_defaults_prints_calibration_table(self, runner):
        result = runner.invoke(cli_main, ["defaults"])
        assert result.exit_code == 0
        assert "observed median" in result.output
        assert result.output.count("governance") == 5

    def test_unknown_flag_is_usage_error(self, runner):
        result = runner.invoke(cli_main, ["rank", "--nonsense"])
        assert result.exit_code == 2

    def test_missing_scenario_is_usage_error(self, runner):
        result = runner.invoke(cli_main, ["rank"])
        assert result.exit_code == 2

    def test_domain_error_exits_one_with_machine_line(self, runner, tmp_path):
        doc = scenario_mod.load("fixture").to_dict()
        doc["market"]["mean_sentiment"] = 2.0
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps(doc))
        result = runner.invoke(cli_main, ["rank", "--scenario", str(bad)])
        assert result.exit_code == 1
        err = result.stderr if hasattr(result, "stderr") else result.output
        assert "error: code=domain field=mean_sentiment" in err

    def test_degenerate_breakeven_exits_one(self, runner):
        result = runner.invoke(cli_main, [
            "breakeven", "--scenario", "fixture",
            "--a", "account/signer_set", "--b", "account/signer_set",
        ])
        assert result.exit_code == 1

    def test_breakeven_fixture_pair(self, runner):
        result = runner.invoke(cli_main, [
            "breakeven", "--scenario", "fixture",
            "--a", "account/delegated_body", "--b", "account/signer_set",
        ])
        assert result.exit_code == 0
        assert json.loads(result.output)["crossing"] == pytest.approx(0.97, abs=1e-9)

    def test_stratify_and_stats_run_on_bundled_tables(self, runner):
        result = runner.invoke(cli_main, ["stratify", "--data", "sample"])
        assert result.exit_code == 0
        assert "systemic" in result.output
        result = runner.invoke(cli_main, ["stats", "--data", "interventions"])
        assert result.exit_code == 0
        assert "71.2%" in result.output

    def test_ingest_reports_row_errors(self, runner, tmp_path):
        from breakglass.incidents import COLUMNS

        bad = tmp_path / "rows.csv"
        header = ",".join(COLUMNS)
        good = "a,2023-01-01,c,p,10.0,0.0,bridge,eligible,false,,,,,,"
        negative = "b,2023-01-01,c,p,-1.0,0.0,bridge,eligible,false,,,,,,"
        bad.write_text(f"{header}\n{good}\n{negative}\n")
        result = runner.invoke(cli_main, ["ingest", "--data", str(bad)])
        assert result.exit_code == 0
        assert "parsed 1 records, 1 rejected" in result.output
        strict = runner.invoke(cli_main, ["ingest", "--data", str(bad), "--strict"])
        assert strict.exit_code == 1

    def test_fit_on_bundled_losses(self, runner):
        result = runner.invoke(cli_main, [
            "fit", "--losses", "losses", "--xmin", "1000000",
        ])
        assert result.exit_code == 0
        doc = json.loads(result.output)
        assert doc["alpha"] > 1.0
        assert doc["n_tail"] >= 10

    def test_simulate_is_seed_deterministic(self, runner):
        args = ["simulate", "--scenario", "fixture", "--cell", "account/delegated_body",
                "--trials", "5000", "--seed", "42"]
        a = runner.invoke(cli_main, args)
        b = runner.invoke(cli_main, args)
        assert a.exit_code == 0
        assert a.output == b.output

    def test_sweep_outputs_rows(self, runner):
        result = runner.invoke(cli_main, [
            "sweep", "--scenario", "sweep", "--param", "culture_multiplier",
            "--start", "0.1", "--stop", "5.0", "--steps", "5", "--format", "json",
        ])
        assert result.exit_code == 0
        rows = json.loads(result.output)["rows"]
        assert len(rows) == 5
        assert rows[0]["best"]["scope"] == "asset"
        assert rows[-1]["best"]["scope"] == "module"

    def test_sentiment_scores_posts_file(self, runner):
        result = runner.invoke(cli_main, [
            "sentiment", "--posts", data_path("posts_sample.txt"),
        ])
        assert result.exit_code == 0
        doc = json.loads(result.output)
        assert doc["count"] == 10
        assert -1.0 <= doc["mean_compound"] <= 1.0

    def test_evaluate_json_in_design_space_order(self, runner, fixture_scenario):
        result = runner.invoke(cli_main, ["evaluate", "--scenario", "fixture",
                                          "--format", "json"])
        assert result.exit_code == 0
        expected = canonical(reporting.evaluate_payload(fixture_scenario))
        assert result.output.strip() == expected


class TestService:
    def test_health_reports_versions(self, client):
        response = client.get("/v1/health")
        assert response.status_code == 200
        body = response.json()
        assert body["status"] == "ok"
        assert body["version"]
        assert body["calibration_version"]

    def test_defaults_match_cli_payload(self, client):
        response = client.get("/v1/defaults")
        assert response.status_code == 200
        assert canonical(response.json()) == canonical(reporting.defaults_payload())

    def test_rank_matches_library(self, client, fixture_scenario):
        response = client.post("/v1/rank", json=scenario_body())
        assert response.status_code == 200
        assert canonical(response.json()) == canonical(
            reporting.rank_payload(fixture_scenario)
        )

    def test_evaluate_rejects_out_of_range_sentiment_as_422(self, client):
        body = scenario_body()
        body["scenario"]["market"]["mean_sentiment"] = 1.5
        response = client.post("/v1/evaluate", json=body)
        assert response.status_code == 422
        err = response.json()
        assert err["code"] == "domain"
        assert err["field"] == "mean_sentiment"

    def test_malformed_body_is_400(self, client):
        response = client.post("/v1/rank", json={"not_a_scenario": 1})
        assert response.status_code == 400
        assert response.json()["code"] == "schema"
        response = client.post(
            "/v1/rank", content=b"{nonsense", headers={"content-type": "application/json"}
        )
        assert response.status_code == 400

    def test_breakeven_matches_cli_and_degenerates_to_422(self, client):
        body = scenario_body()
        body["pair"] = [
            {"scope": "account", "authority": "delegated_body"},
            {"scope": "account", "authority": "signer_set"},
        ]
        response = client.post("/v1/breakeven", json=body)
        assert response.status_code == 200
        assert response.json()["crossing"] == pytest.approx(0.97, abs=1e-9)

        body["pair"][1] = body["pair"][0]
        response = client.post("/v1/breakeven", json=body)
        assert response.status_code == 422
        assert response.json()["code"] == "degenerate"

    def test_breakeven_without_crossing_returns_null(self, client):
        body = scenario_body()
        # Same discount rates: parallel cost lines, no crossing.
        body["pair"] = [
            {"scope": "protocol", "authority": "signer_set"},
            {"scope": "module", "authority": "signer_set"},
        ]
        response = client.post("/v1/breakeven", json=body)
        assert response.status_code == 200
        assert response.json()["crossing"] is None

    def test_simulate_requires_explicit_seed(self, client):
        body = scenario_body()
        body["architecture"] = {"scope": "account", "authority": "delegated_body"}
        body["config"] = {"n_trials": 1000}
        response = client.post("/v1/simulate", json=body)
        assert response.status_code == 400

    def test_simulate_is_deterministic_and_stateless(self, client):
        body = scenario_body()
        body["architecture"] = {"scope": "account", "authority": "delegated_body"}
        body["config"] = {"n_trials": 5000, "seed": 7}
        first = client.post("/v1/simulate", json=body)
        second = client.post("/v1/simulate", json=body)
        assert first.status_code == 200
        assert first.content == second.content
        assert first.json()["config"]["generator"] == "philox4x64"

    def test_fit_endpoint(self, client):
        losses = [float(v) for v in range(1, 200)]
        response = client.post("/v1/fit", json={"losses": losses, "xmin": 10.0})
        assert response.status_code == 200
        body = response.json()
        assert body["alpha"] > 1.0
        assert body["p_value"] is None
        response = client.post(
            "/v1/fit",
            json={"losses": losses, "xmin": 10.0, "bootstrap": {"n_boot": 100, "seed": 1}},
        )
        assert response.status_code == 200
        assert 0.0 <= response.json()["p_value"] <= 1.0

    def test_fit_insufficient_data_is_422(self, client):
        response = client.post("/v1/fit", json={"losses": [1.0, 2.0, 3.0]})
        assert response.status_code == 422
        assert response.json()["code"] == "insufficient_data"

    def test_sentiment_aggregate_scores_and_posts(self, client):
        response = client.post("/v1/sentiment/aggregate", json={"scores": [0.2, -0.2]})
        assert response.status_code == 200
        assert response.json() == {
            "count": 2, "mean_compound": 0.0, "cost_multiplier": 1.0,
        }
        response = client.post(
            "/v1/sentiment/aggregate", json={"posts": ["good", "not good"]}
        )
        assert response.status_code == 200
        assert response.json()["mean_compound"] == 0.0
        response = client.post("/v1/sentiment/aggregate", json={})
        assert response.status_code == 400
        response = client.post(
            "/v1/sentiment/aggregate", json={"scores": [2.0]}
        )
        assert response.status_code == 422

    def test_identical_requests_identical_bodies(self, client):
        first = client.post("/v1/rank", json=scenario_body())
        second = client.post("/v1/rank", json=scenario_body())
        assert first.content == second.content


class TestThreeWayEquivalence:
    def test_library_cli_and_http_agree_bitwise(self, runner, client, fixture_scenario):
        library = canonical(reporting.rank_payload(fixture_scenario))
        cli_result = runner.invoke(cli_main, ["rank", "--scenario", "fixture",
                                              "--format", "json"])
        assert cli_result.exit_code == 0
        cli_canonical = canonical(json.loads(cli_result.output))
        http_response = client.post("/v1/rank", json=scenario_body())
        http_canonical = canonical(http_response.json())
        assert library == cli_canonical == http_canonical
