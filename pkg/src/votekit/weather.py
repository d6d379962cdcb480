"""Client for an OpenWeather-compatible current-conditions endpoint.

Two modes: ``live`` issues real HTTP requests; ``fixture`` reads
responses from disk in the exact upstream shape, which lets the whole
test suite and any offline deployment run without a network or API key.
Units are normalized here: Kelvin to Celsius, meters to kilometers.
"""

from __future__ import annotations

import json
import logging
import os
from dataclasses import dataclass
from pathlib import Path

import requests

from .errors import BadStatus, FixtureNotFound, MalformedResponse, Unreachable
from .turnout import WeatherObservation

logger = logging.getLogger(__name__)

DEFAULT_BASE_URL = "https://api.openweathermap.org"
DEFAULT_VISIBILITY_KM = 10.0  # upstream omits visibility in clear conditions

ENV_MODE = "WEATHER_MODE"
ENV_API_KEY = "WEATHER_API_KEY"
ENV_BASE_URL = "WEATHER_BASE_URL"
ENV_FIXTURE_DIR = "WEATHER_FIXTURE_DIR"


@dataclass(frozen=True)
class GatewayConfig:
    mode: str = "fixture"  # "live" or "fixture"
    base_url: str = DEFAULT_BASE_URL
    api_key: str = ""
    fixture_dir: str = ""
    timeout: float = 5.0
    retries: int = 2

    def __post_init__(self):
        if self.mode not in ("live", "fixture"):
            raise ValueError(f"unknown gateway mode {self.mode!r}")
        if self.mode == "live" and not self.api_key:
            raise ValueError("live mode requires an api_key")
        if self.mode == "fixture" and not self.fixture_dir:
            raise ValueError("fixture mode requires a fixture_dir")

    @classmethod
    def from_env(cls, env=os.environ) -> "GatewayConfig":
        return cls(
            mode=env.get(ENV_MODE, "fixture"),
            base_url=env.get(ENV_BASE_URL, DEFAULT_BASE_URL),
            api_key=env.get(ENV_API_KEY, ""),
            fixture_dir=env.get(ENV_FIXTURE_DIR, ""),
        )


def _clamp(name: str, value: float, low: float, high: float) -> float:
    if value < low or value > high:
        clamped = min(max(value, low), high)
        logger.warning("weather field %s=%s outside [%s, %s]; clamped to %s",
                       name, value, low, high, clamped)
        return clamped
    return value


def fixture_filename(lat: float, lon: float) -> str:
    return f"{lat:.2f}_{lon:.2f}.json"


class WeatherGateway:
    def __init__(self, config: GatewayConfig):
        self.config = config

    def fetch_current(self, lat: float, lon: float) -> WeatherObservation:
        if not -90.0 <= lat <= 90.0:
            raise ValueError(f"lat {lat} outside [-90, 90]")
        if not -180.0 <= lon <= 180.0:
            raise ValueError(f"lon {lon} outside [-180, 180]")
        if self.config.mode == "fixture":
            doc = self._read_fixture(lat, lon)
        else:
            doc = self._fetch_live(lat, lon)
        return self._parse(doc, lat, lon)

    def healthcheck(self) -> dict:
        """Probe the configured source; reports failures, never raises."""
        if self.config.mode == "fixture":
            directory = Path(self.config.fixture_dir)
            if directory.is_dir() and os.access(directory, os.R_OK):
                return {"ok": True, "mode": "fixture", "detail": str(directory)}
            return {"ok": False, "mode": "fixture", "detail": f"fixture dir unreadable: {directory}"}
        try:
            self._fetch_live(0.0, 0.0)
            return {"ok": True, "mode": "live", "detail": self.config.base_url}
        except BadStatus as exc:
            detail = "invalid key" if exc.status == 401 else str(exc)
            return {"ok": False, "mode": "live", "detail": detail}
        except Exception as exc:  # noqa: BLE001 - healthcheck must not throw
            return {"ok": False, "mode": "live", "detail": str(exc)}

    # -- sources -----------------------------------------------------------

    def _read_fixture(self, lat: float, lon: float) -> dict:
        path = Path(self.config.fixture_dir) / fixture_filename(lat, lon)
        if not path.is_file():
            raise FixtureNotFound(f"no fixture {path.name} in {self.config.fixture_dir}")
        try:
            return json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise MalformedResponse(f"fixture {path.name} is not valid JSON") from exc

    def _fetch_live(self, lat: float, lon: float) -> dict:
        url = f"{self.config.base_url}/data/2.5/weather"
        params = {"lat": lat, "lon": lon, "appid": self.config.api_key}
        last_error = None
        for _ in range(self.config.retries + 1):
            try:
                response = requests.get(url, params=params, timeout=self.config.timeout)
            except requests.RequestException as exc:
                last_error = exc
                continue
            if response.status_code != 200:
                raise BadStatus(
                    f"weather API returned {response.status_code}", status=response.status_code
                )
            try:
                return response.json()
            except ValueError as exc:
                raise MalformedResponse("weather API returned non-JSON body") from exc
        raise Unreachable(f"weather API unreachable after retries: {last_error}")

    # -- normalization -------------------------------------------------------

    def _parse(self, doc: dict, lat: float, lon: float) -> WeatherObservation:
        try:
            main = doc["main"]
            temp_c = float(main["temp"]) - 273.15
            humidity = float(main["humidity"])
            wind = float(doc["wind"]["speed"])
            clouds = float(doc["clouds"]["all"])
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedResponse(f"missing or invalid field in weather response: {exc}") from exc
        visibility_km = DEFAULT_VISIBILITY_KM
        if "visibility" in doc:
            try:
                visibility_km = float(doc["visibility"]) / 1000.0
            except (TypeError, ValueError) as exc:
                raise MalformedResponse("visibility field is not numeric") from exc
        return WeatherObservation(
            visibility_km=_clamp("visibility_km", visibility_km, 0.0, 1000.0),
            humidity_pct=_clamp("humidity_pct", humidity, 0.0, 100.0),
            temperature_c=temp_c,
            wind_speed_ms=_clamp("wind_speed_ms", wind, 0.0, 500.0),
            cloudiness_pct=_clamp("cloudiness_pct", clouds, 0.0, 100.0),
            observed_at=int(doc.get("dt", 0)),
            lat=lat,
            lon=lon,
        )
