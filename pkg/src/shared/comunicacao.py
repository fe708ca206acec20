# src/shared/comunicacao.py
import logging
from typing import Dict, Any, Callable, List
from dataclasses import dataclass, field
from datetime import datetime

logger = logging.getLogger(__name__)

# Tipos de evento publicados pelo otimizador
EVENTO_INICIO = "OTIMIZACAO_INICIO"
EVENTO_ITERACAO = "OTIMIZACAO_ITERACAO"
EVENTO_FIM = "OTIMIZACAO_FIM"


@dataclass
class Evento:
    tipo: str
    dados: Dict[str, Any]
    origem: str
    timestamp: datetime = field(default_factory=datetime.now)


class BarramentoEventos:
    """
    Barramento síncrono de eventos. O otimizador é sequencial, então os
    assinantes são chamados na ordem de assinatura, na mesma thread.
    """
    def __init__(self):
        self.assinantes: Dict[str, List[Callable[[Evento], None]]] = {}

    def assinar(self, tipo_evento: str, callback: Callable[[Evento], None]):
        if tipo_evento not in self.assinantes:
            self.assinantes[tipo_evento] = []
        self.assinantes[tipo_evento].append(callback)

    def publicar(self, evento: Evento):
        for callback in self.assinantes.get(evento.tipo, []):
            callback(evento)
        logger.debug(f"Evento {evento.tipo} de {evento.origem} entregue a {len(self.assinantes.get(evento.tipo, []))} assinante(s).")
