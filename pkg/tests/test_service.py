import numpy as np
import pytest
from fastapi.testclient import TestClient

from satnull.service.app import app
from test_campaign import fast_scenario


@pytest.fixture(scope="module")
def client():
    return TestClient(app)


def scenario_json(**overrides):
    return fast_scenario(**overrides).model_dump(mode="json")


class TestInfo:
    def test_root_lists_endpoints(self, client):
        body = client.get("/").json()
        assert body["name"] == "satnull"
        assert "/campaign" in body["endpoints"]
        assert "proposed" in body["method_tags"]


class TestCampaignEndpoint:
    def test_records_csv(self, client):
        resp = client.post(
            "/campaign", json={"scenario": scenario_json(trials=2), "methods": ["hf", "fd-bd"]}
        )
        assert resp.status_code == 200
        assert resp.headers["content-type"].startswith("text/csv")
        lines = resp.text.strip().splitlines()
        assert lines[0] == "trial,method,sum_rate_bits,inr_db_sat1,inr_db_sat2,final_cost,wall_ms"
        assert len(lines) == 1 + 2 * 2

    def test_byte_identical_repeat(self, client):
        payload = {"scenario": scenario_json(trials=2), "methods": ["hf"]}
        a = client.post("/campaign", json=payload).content
        b = client.post("/campaign", json=payload).content
        assert a == b

    def test_cdf_output(self, client):
        resp = client.post(
            "/campaign",
            json={"scenario": scenario_json(trials=2), "methods": ["hf"], "output": "cdf-inr"},
        )
        assert resp.status_code == 200
        assert resp.text.splitlines()[0] == "method,value,cdf"

    def test_unknown_method_is_400(self, client):
        resp = client.post(
            "/campaign", json={"scenario": scenario_json(trials=1), "methods": ["zf"]}
        )
        assert resp.status_code == 400
        assert resp.json()["kind"] == "configuration"

    def test_invalid_scenario_is_422(self, client):
        bad = scenario_json(trials=1)
        bad["n_rf"] = 99
        resp = client.post("/campaign", json={"scenario": bad})
        assert resp.status_code == 422


class TestSweepEndpoints:
    def test_power_sweep(self, client):
        resp = client.post(
            "/power-sweep",
            json={"scenario": scenario_json(trials=1), "methods": ["hf"], "powers": [0.1, 1.0]},
        )
        assert resp.status_code == 200
        lines = resp.text.strip().splitlines()
        assert lines[0] == "p_t_watts,method,mean_sum_rate,mean_inr_db"
        assert len(lines) == 3

    def test_lambda_sweep_defaults_to_proposed(self, client):
        resp = client.post(
            "/lambda-sweep", json={"scenario": scenario_json(trials=1), "lambdas": [0.0, 10.0]}
        )
        assert resp.status_code == 200
        rows = [line.split(",") for line in resp.text.strip().splitlines()[1:]]
        assert all(row[1] == "proposed" for row in rows)

    def test_power_sweep_zero_power_rejected(self, client):
        resp = client.post(
            "/power-sweep", json={"scenario": scenario_json(trials=1), "powers": [0.0]}
        )
        assert resp.status_code == 400


class TestGradcheckEndpoint:
    def test_csv_report(self, client):
        resp = client.post("/gradcheck", json={"seed": 1, "instances": 3})
        assert resp.status_code == 200
        lines = resp.text.strip().splitlines()
        assert lines[0].startswith("instance,")
        assert len(lines) == 4
        worst = max(float(line.split(",")[-1]) for line in lines[1:])
        assert worst <= 1e-5


class TestDesignEndpoint:
    def test_returns_precoder_and_metrics(self, client):
        resp = client.post(
            "/design", json={"scenario": scenario_json(trials=1), "method": "hf", "trial_index": 0}
        )
        assert resp.status_code == 200
        body = resp.json()
        assert body["method"] == "hf"
        f = np.asarray(body["precoder"]["re"]) + 1j * np.asarray(body["precoder"]["im"])
        assert f.shape == (8, 2)
        assert np.linalg.norm(f) ** 2 == pytest.approx(1.0, rel=1e-6)
        assert len(body["combiners"]) == 2
        assert len(body["per_sat_inr_db"]) == 2
        assert body["sum_rate_bits"] > 0

    def test_deterministic_given_trial_index(self, client):
        payload = {"scenario": scenario_json(trials=1), "method": "dft-bd", "trial_index": 3}
        a = client.post("/design", json=payload).json()
        b = client.post("/design", json=payload).json()
        assert a == b

    def test_unknown_method_is_400(self, client):
        resp = client.post("/design", json={"scenario": scenario_json(trials=1), "method": "zf"})
        assert resp.status_code == 400
