"""
Wrapper de logging compartilhado
"""
import logging

logger = logging.getLogger('emparelhamento')


def registrar_log(modulo, mensagem, nivel='INFO'):
    """Wrapper para logging"""
    texto = f"[{modulo}] {mensagem}"
    if nivel == 'ERROR':
        logger.error(texto)
    elif nivel == 'WARNING':
        logger.warning(texto)
    elif nivel == 'DEBUG':
        logger.debug(texto)
    else:
        logger.info(texto)
