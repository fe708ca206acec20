# src/shared/cache.py

import logging
from typing import Any, Callable, Hashable, Optional
from collections import OrderedDict

logger = logging.getLogger(__name__)


class CacheTabelas:
    """
    Cache LRU (Least Recently Used) para tabelas numéricas caras de recalcular,
    como os valores da base B-spline nos nós de quadratura ou a última
    avaliação do objetivo em um ponto x.
    """
    def __init__(self, max_size: int = 32, nome: str = "tabelas"):
        self.max_size = max_size
        self.nome = nome
        # OrderedDict para implementar LRU
        self.cache: OrderedDict[Hashable, Any] = OrderedDict()
        self.hits = 0
        self.misses = 0

    def _aplicar_lru(self):
        while len(self.cache) > self.max_size:
            chave_lru = next(iter(self.cache))
            del self.cache[chave_lru]
            logger.debug(f"[{self.nome}] Item LRU removido: {chave_lru!r}")

    def get(self, chave: Hashable) -> Optional[Any]:
        """Recupera um item do cache, movendo-o para o fim (mais recente)."""
        if chave in self.cache:
            valor = self.cache.pop(chave)
            self.cache[chave] = valor
            self.hits += 1
            return valor
        self.misses += 1
        return None

    def set(self, chave: Hashable, dado: Any):
        if chave in self.cache:
            self.cache.pop(chave)
        self.cache[chave] = dado
        self._aplicar_lru()

    def get_or_compute(self, chave: Hashable, fabrica: Callable[[], Any]) -> Any:
        """Retorna o item em cache ou o calcula com `fabrica` e o armazena."""
        valor = self.get(chave)
        if valor is None:
            logger.debug(f"[{self.nome}] Cache miss para {chave!r}; calculando.")
            valor = fabrica()
            self.set(chave, valor)
        return valor

    def size(self) -> int:
        return len(self.cache)

    def clear(self):
        self.cache.clear()
        self.hits = 0
        self.misses = 0
        logger.debug(f"[{self.nome}] Cache limpo.")
