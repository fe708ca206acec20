# src/shared/configuracao.py

import os
from pydantic import BaseModel, Field

ENV_THREADS = "MUTUAL_COILS_THREADS"
ENV_CHUNK = "MUTUAL_COILS_CHUNK"
ENV_LOG_LEVEL = "MUTUAL_COILS_LOG_LEVEL"


class Settings(BaseModel):
    """Configurações de execução lidas do ambiente."""
    threads: int = Field(default=1, ge=1, description="Threads para os blocos do núcleo de pares de intervalos.")
    chunk_size: int = Field(default=512, ge=1, description="Linhas (nós da primeira bobina) por bloco do núcleo.")
    log_level: str = Field(default="INFO", description="Nível de logging do ponto de entrada.")

    @classmethod
    def from_env(cls) -> "Settings":
        valores = {}
        if os.environ.get(ENV_THREADS):
            valores["threads"] = int(os.environ[ENV_THREADS])
        if os.environ.get(ENV_CHUNK):
            valores["chunk_size"] = int(os.environ[ENV_CHUNK])
        if os.environ.get(ENV_LOG_LEVEL):
            valores["log_level"] = os.environ[ENV_LOG_LEVEL].upper()
        return cls(**valores)


def get_settings() -> Settings:
    return Settings.from_env()
