"""Service configuration: one JSON file plus env overrides for weather."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path

from ..forest import ForestParams
from ..roles import Role
from ..weather import GatewayConfig


@dataclass
class ServiceConfig:
    data_dir: str = "data"
    listen_host: str = "127.0.0.1"
    listen_port: int = 8080
    weather: GatewayConfig | None = None
    session_ttl: int = 15 * 60
    qr_ttl: int = 10 * 60
    seed: int = 0
    snapshot_every: int = 1000  # events between automatic snapshots
    # NIC -> role name; anyone enrolled but unlisted is a plain voter
    role_assignments: dict[str, str] = field(default_factory=dict)
    # static super-admin credential for first-run setup (enrolling the
    # first officer requires an officer)
    bootstrap_token: str = ""
    turnout_model_path: str = ""
    violence_model_path: str = ""
    violence_history_csv: str = ""
    attendance_history_csv: str = ""
    model_params: ForestParams = field(default_factory=ForestParams)

    def __post_init__(self):
        for nic, role_name in self.role_assignments.items():
            Role(role_name)  # validate early

    def role_for(self, nic: str) -> Role:
        return Role(self.role_assignments.get(nic, "voter"))

    @classmethod
    def from_file(cls, path, env=os.environ) -> "ServiceConfig":
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
        weather_doc = doc.pop("weather", None)
        params_doc = doc.pop("model_params", None)
        config = cls(**doc)
        if weather_doc is not None:
            config.weather = GatewayConfig(**weather_doc)
        else:
            try:
                config.weather = GatewayConfig.from_env(env)
            except ValueError:
                config.weather = None  # predictions endpoint will report this
        if params_doc is not None:
            config.model_params = ForestParams(**params_doc)
        return config
