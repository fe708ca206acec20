# src/scene/fixtures.py

"""Cenas de exemplo versionadas em `scenes/`."""

from pathlib import Path
from typing import Dict

from src.scene.cena import Scene
from src.scene.loader import load_scene
from src.shared.erros import SceneError

SCENES_DIR = Path(__file__).resolve().parents[2] / "scenes"

EXAMPLES: Dict[str, str] = {
    "example1-b1-n32": "example1_b1_n32.json",
    "example1-b3-n32": "example1_b3_n32.json",
    "example1-b1-n64": "example1_b1_n64.json",
    "example1-b3-n64": "example1_b3_n64.json",
    "example2": "example2.json",
    "example3-case1": "example3_case1.json",
    "example3-case2": "example3_case2.json",
    "example3-case3": "example3_case3.json",
}


def example_path(nome: str) -> Path:
    if nome not in EXAMPLES:
        raise SceneError(f"Exemplo desconhecido '{nome}'. Disponíveis: {sorted(EXAMPLES)}.")
    return SCENES_DIR / EXAMPLES[nome]


def load_example(nome: str) -> Scene:
    return load_scene(example_path(nome))
