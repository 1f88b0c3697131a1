"""
API Decorators do Match Engine
Respostas de erro padronizadas {'sucesso': False, 'erro': ...} para as views DRF
"""
from functools import wraps
from django.core.exceptions import ValidationError
from rest_framework import status
from rest_framework.response import Response
import logging

logger = logging.getLogger(__name__)


def _erro(mensagem, codigo):
    return Response({'sucesso': False, 'erro': mensagem}, status=codigo)


def handle_api_errors(view_func):
    """
    Converte exceções da view em resposta JSON

    ValidationError/ValueError -> 400 (entrada inválida)
    RuntimeError -> 422 (entrada válida, mas o cálculo não concluiu:
    exaustão de amostragem, colisão de ranking, todas as instâncias falharam)
    Demais -> 500
    """
    @wraps(view_func)
    def wrapper(request, *args, **kwargs):
        try:
            return view_func(request, *args, **kwargs)
        except ValidationError as e:
            mensagem = '; '.join(e.messages)
            logger.warning(f"Requisição inválida em {view_func.__name__}: {mensagem}")
            return _erro(mensagem, status.HTTP_400_BAD_REQUEST)
        except ValueError as e:
            logger.warning(f"Valor inválido em {view_func.__name__}: {e}")
            return _erro(str(e), status.HTTP_400_BAD_REQUEST)
        except RuntimeError as e:
            logger.warning(f"Cálculo não concluído em {view_func.__name__}: {e}")
            return _erro(str(e), status.HTTP_422_UNPROCESSABLE_ENTITY)
        except Exception as e:
            logger.error(f"Erro em {view_func.__name__}: {e}", exc_info=True)
            return _erro(str(e), status.HTTP_500_INTERNAL_SERVER_ERROR)
    return wrapper


def validate_required_params(required_params, um_de=None):
    """
    Valida parâmetros obrigatórios do corpo da requisição

    Args:
        required_params: chaves que devem estar todas presentes
        um_de: chaves das quais exatamente uma deve estar presente (ex.: ['graph', 'gen'])
    """
    def decorator(view_func):
        @wraps(view_func)
        def wrapper(request, *args, **kwargs):
            missing = [param for param in required_params if param not in request.data]
            if missing:
                return _erro(f'Parâmetros obrigatórios ausentes: {", ".join(missing)}',
                             status.HTTP_400_BAD_REQUEST)

            if um_de:
                presentes = [param for param in um_de if request.data.get(param)]
                if len(presentes) != 1:
                    return _erro(f'Informe exatamente um entre: {", ".join(um_de)}',
                                 status.HTTP_400_BAD_REQUEST)

            return view_func(request, *args, **kwargs)
        return wrapper
    return decorator
