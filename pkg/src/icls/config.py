"""Runtime configuration, sourced from environment variables."""

from __future__ import annotations

import os
from dataclasses import dataclass, field


@dataclass
class AppConfig:
    database_path: str = "icls.db"
    port: int = 8000
    llm_mode: str = "mock"  # "live" | "mock"
    llm_base_url: str = ""
    llm_api_key: str = ""
    llm_model: str = "mock-model"
    llm_context_window: int = 8192
    admin_bootstrap_token: str = "change-me"
    session_ttl_hours: int = 24
    retrieval_alpha: float = 0.7
    retrieval_top_k: int = 4
    pipeline_timeout_seconds: float = 120.0
    ui_dist_path: str | None = None

    @classmethod
    def from_env(cls, env: dict | None = None) -> "AppConfig":
        env = dict(os.environ if env is None else env)
        defaults = cls()

        def get(name, fallback):
            return env.get(name, fallback)

        database = get("DATABASE_URL", defaults.database_path)
        if database.startswith("sqlite:///"):
            database = database[len("sqlite:///"):]
        return cls(
            database_path=database,
            port=int(get("PORT", defaults.port)),
            llm_mode=get("LLM_MODE", defaults.llm_mode),
            llm_base_url=get("LLM_BASE_URL", defaults.llm_base_url),
            llm_api_key=get("LLM_API_KEY", defaults.llm_api_key),
            llm_model=get("LLM_MODEL", defaults.llm_model),
            llm_context_window=int(get("LLM_CONTEXT_WINDOW", defaults.llm_context_window)),
            admin_bootstrap_token=get("ADMIN_BOOTSTRAP_TOKEN", defaults.admin_bootstrap_token),
            session_ttl_hours=int(get("SESSION_TTL_HOURS", defaults.session_ttl_hours)),
            retrieval_alpha=float(get("RETRIEVAL_ALPHA", defaults.retrieval_alpha)),
            retrieval_top_k=int(get("RETRIEVAL_TOP_K", defaults.retrieval_top_k)),
            pipeline_timeout_seconds=float(
                get("PIPELINE_TIMEOUT_SECONDS", defaults.pipeline_timeout_seconds)
            ),
            ui_dist_path=get("UI_DIST", defaults.ui_dist_path),
        )
