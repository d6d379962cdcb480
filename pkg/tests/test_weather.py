import json
import threading
from http.server import BaseHTTPRequestHandler, HTTPServer

import pytest

from votekit.errors import BadStatus, FixtureNotFound, MalformedResponse, Unreachable
from votekit.weather import (
    DEFAULT_VISIBILITY_KM,
    GatewayConfig,
    WeatherGateway,
    fixture_filename,
)

SAMPLE_RESPONSE = {
    "main": {"temp": 301.15, "humidity": 80},
    "wind": {"speed": 3.2},
    "clouds": {"all": 40},
    "visibility": 8000,
    "dt": 1_700_000_000,
}


def write_fixture(directory, lat, lon, doc):
    path = directory / fixture_filename(lat, lon)
    path.write_text(json.dumps(doc))
    return path


@pytest.fixture
def fixture_gateway(tmp_path):
    return WeatherGateway(GatewayConfig(mode="fixture", fixture_dir=str(tmp_path))), tmp_path


class TestFixtureMode:
    def test_kelvin_to_celsius(self, fixture_gateway):
        gateway, directory = fixture_gateway
        write_fixture(directory, 6.91, 79.86, SAMPLE_RESPONSE)
        obs = gateway.fetch_current(6.91, 79.86)
        # 301.15 K - 273.15 = 28.0 C
        assert obs.temperature_c == pytest.approx(28.0)
        assert obs.humidity_pct == 80.0
        assert obs.wind_speed_ms == pytest.approx(3.2)
        assert obs.cloudiness_pct == 40.0
        assert obs.visibility_km == pytest.approx(8.0)  # 8000 m
        assert obs.observed_at == 1_700_000_000

    def test_missing_visibility_defaults_to_10km(self, fixture_gateway):
        gateway, directory = fixture_gateway
        doc = {k: v for k, v in SAMPLE_RESPONSE.items() if k != "visibility"}
        write_fixture(directory, 6.91, 79.86, doc)
        assert gateway.fetch_current(6.91, 79.86).visibility_km == DEFAULT_VISIBILITY_KM

    def test_unknown_coordinates(self, fixture_gateway):
        gateway, _ = fixture_gateway
        with pytest.raises(FixtureNotFound):
            gateway.fetch_current(0.0, 0.0)

    def test_filename_rounding(self):
        assert fixture_filename(6.9066, 79.8612) == "6.91_79.86.json"
        assert fixture_filename(-33.8688, 151.2093) == "-33.87_151.21.json"

    def test_determinism(self, fixture_gateway):
        gateway, directory = fixture_gateway
        write_fixture(directory, 1.0, 2.0, SAMPLE_RESPONSE)
        assert gateway.fetch_current(1.0, 2.0) == gateway.fetch_current(1.0, 2.0)

    def test_out_of_range_values_clamped_with_warning(self, fixture_gateway, caplog):
        gateway, directory = fixture_gateway
        doc = dict(SAMPLE_RESPONSE, main={"temp": 301.15, "humidity": 120})
        write_fixture(directory, 1.0, 2.0, doc)
        with caplog.at_level("WARNING"):
            obs = gateway.fetch_current(1.0, 2.0)
        assert obs.humidity_pct == 100.0
        assert any("humidity_pct" in record.message for record in caplog.records)

    def test_malformed_fixture(self, fixture_gateway):
        gateway, directory = fixture_gateway
        (directory / fixture_filename(1.0, 2.0)).write_text("{bad json")
        with pytest.raises(MalformedResponse):
            gateway.fetch_current(1.0, 2.0)

    def test_missing_field_is_malformed(self, fixture_gateway):
        gateway, directory = fixture_gateway
        write_fixture(directory, 1.0, 2.0, {"main": {"temp": 300.0}})
        with pytest.raises(MalformedResponse):
            gateway.fetch_current(1.0, 2.0)

    def test_coordinate_validation(self, fixture_gateway):
        gateway, _ = fixture_gateway
        with pytest.raises(ValueError):
            gateway.fetch_current(91.0, 0.0)
        with pytest.raises(ValueError):
            gateway.fetch_current(0.0, 181.0)


class TestConfig:
    def test_live_requires_key(self):
        with pytest.raises(ValueError):
            GatewayConfig(mode="live", api_key="")

    def test_fixture_requires_dir(self):
        with pytest.raises(ValueError):
            GatewayConfig(mode="fixture", fixture_dir="")

    def test_from_env(self, tmp_path):
        env = {"WEATHER_MODE": "fixture", "WEATHER_FIXTURE_DIR": str(tmp_path)}
        config = GatewayConfig.from_env(env)
        assert config.mode == "fixture"
        assert config.fixture_dir == str(tmp_path)


class TestHealthcheck:
    def test_fixture_ok(self, fixture_gateway):
        gateway, _ = fixture_gateway
        assert gateway.healthcheck()["ok"] is True

    def test_fixture_missing_dir(self, tmp_path):
        gateway = WeatherGateway(
            GatewayConfig(mode="fixture", fixture_dir=str(tmp_path / "nope"))
        )
        result = gateway.healthcheck()
        assert result["ok"] is False and "nope" in result["detail"]


class _StubHandler(BaseHTTPRequestHandler):
    status = 200
    body: bytes = json.dumps(SAMPLE_RESPONSE).encode()
    requests_seen = 0

    def do_GET(self):
        type(self).requests_seen += 1
        self.send_response(self.status)
        self.send_header("Content-Type", "application/json")
        self.end_headers()
        self.wfile.write(self.body)

    def log_message(self, *args):
        pass


@pytest.fixture
def stub_server():
    handler = type("Handler", (_StubHandler,), {"requests_seen": 0})
    server = HTTPServer(("127.0.0.1", 0), handler)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    yield f"http://127.0.0.1:{server.server_address[1]}", handler
    server.shutdown()


class TestLiveMode:
    def gateway(self, base_url, retries=0):
        return WeatherGateway(
            GatewayConfig(mode="live", base_url=base_url, api_key="k", timeout=2.0, retries=retries)
        )

    def test_parses_via_http(self, stub_server):
        base_url, _ = stub_server
        obs = self.gateway(base_url).fetch_current(6.91, 79.86)
        assert obs.temperature_c == pytest.approx(28.0)

    def test_non_200_raises_bad_status(self, stub_server):
        base_url, handler = stub_server
        handler.status = 401
        with pytest.raises(BadStatus) as err:
            self.gateway(base_url).fetch_current(0.0, 0.0)
        assert err.value.status == 401

    def test_malformed_body(self, stub_server):
        base_url, handler = stub_server
        handler.body = b"not json"
        with pytest.raises(MalformedResponse):
            self.gateway(base_url).fetch_current(0.0, 0.0)

    def test_unreachable_after_retries(self):
        gateway = WeatherGateway(
            GatewayConfig(
                mode="live", base_url="http://127.0.0.1:9", api_key="k",
                timeout=0.2, retries=2,
            )
        )
        with pytest.raises(Unreachable):
            gateway.fetch_current(0.0, 0.0)

    def test_healthcheck_reports_invalid_key(self, stub_server):
        base_url, handler = stub_server
        handler.status = 401
        result = self.gateway(base_url).healthcheck()
        assert result == {"ok": False, "mode": "live", "detail": "invalid key"}

    def test_no_retry_on_success(self, stub_server):
        base_url, handler = stub_server
        self.gateway(base_url, retries=3).fetch_current(0.0, 0.0)
        assert handler.requests_seen == 1
