# src/scene/export.py

import json
import logging
import os
import tempfile
from pathlib import Path
from typing import Callable, Dict, Optional, Union

import numpy as np
import numpy.typing as npt
import pandas as pd

from src.geometry.curve import length, polyline
from src.optimization.layout import DesignLayout
from src.optimization.modelos import OptimizationTrace
from src.optimization.objective import evaluate_scene
from src.scene.cena import Scene
from src.scene.loader import serialize_scene

logger = logging.getLogger(__name__)

POLYLINE_SAMPLES = 512


def write_atomic(path: Path, escrever: Callable[[Path], None]) -> Path:
    """Grava num temporário do mesmo diretório e renomeia sobre o destino."""
    fd, temporario = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    os.close(fd)
    try:
        escrever(Path(temporario))
        os.replace(temporario, path)
    except BaseException:
        Path(temporario).unlink(missing_ok=True)
        raise
    return path


def write_frame(frame: pd.DataFrame, path: Path) -> Path:
    return write_atomic(path, lambda p: frame.to_csv(p, index=False, float_format="%.17g"))


def write_text(texto: str, path: Path) -> Path:
    return write_atomic(path, lambda p: p.write_text(texto, encoding="utf-8"))


def control_points_frame(scene: Scene) -> pd.DataFrame:
    linhas = []
    for coil in scene.coils:
        for indice, (x, y, z) in enumerate(coil.curve.control_points):
            linhas.append({"coil": coil.label, "index": indice, "x": x, "y": y, "z": z})
    return pd.DataFrame(linhas)


def summarize(scene: Scene, trace: Optional[OptimizationTrace] = None) -> dict:
    """Resumo: J final, M de cada par contra o alvo, comprimentos contra as janelas."""
    avaliacao = evaluate_scene(scene, with_gradient=False)
    comprimentos = []
    for spec in scene.length_specs:
        atual = length(scene.coils[spec.coil].curve, scene.rule)
        baixo, alto = spec.window
        comprimentos.append({
            "coil": scene.coils[spec.coil].label,
            "length": atual,
            "initial_length": spec.initial_length,
            "window": [baixo, alto],
            "inside_window": bool(baixo <= atual <= alto),
            "change_percent": 100.0 * (atual - spec.initial_length) / spec.initial_length,
        })
    resumo = {
        "J": avaliacao.J,
        "pairs": [{
            "alpha": scene.coils[p.alpha].label,
            "beta": scene.coils[p.beta].label,
            "M": p.M,
            "target": p.target,
        } for p in avaliacao.pairs],
        "lengths": comprimentos,
        "coil_lengths": {c.label: length(c.curve, scene.rule) for c in scene.coils},
    }
    if trace is not None:
        resumo.update({
            "status": trace.status.value if trace.status else None,
            "message": trace.message,
            "iterations": trace.iterations,
            "notes": trace.notes,
        })
    return resumo


def export_results(scene: Scene, x: npt.ArrayLike, trace: OptimizationTrace, out_dir: Union[str, Path],
                   layout: Optional[DesignLayout] = None) -> Dict[str, Path]:
    """Grava pontos de controle, polilinhas, histórico, resumo e a cena otimizada em `out_dir`."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    layout = layout or DesignLayout(scene)
    otimizada = layout.apply(np.asarray(x, dtype=float))

    arquivos = {
        "control_points": write_frame(control_points_frame(otimizada), out_dir / "control_points.csv"),
        "trace": write_frame(trace.to_frame(), out_dir / "trace.csv"),
        "summary": write_text(json.dumps(summarize(otimizada, trace), indent=2), out_dir / "summary.json"),
        "scene": write_text(serialize_scene(otimizada), out_dir / "optimized_scene.json"),
    }
    for coil in otimizada.coils:
        arquivos[f"polyline_{coil.label}"] = write_frame(
            polyline(coil.curve, POLYLINE_SAMPLES), out_dir / f"polyline_{coil.label}.csv")
    logger.info(f"Resultados gravados em {out_dir} ({len(arquivos)} arquivos).")
    return arquivos
