# shadowlab/services/__init__.py

from .file_service import file_service
from .plot_service import plot_service
from .experiment_service import experiment_service

# Share one file service between the services that write artifacts
plot_service.set_file_service(file_service)
experiment_service.set_file_service(file_service)

__all__ = [
    'file_service',
    'plot_service',
    'experiment_service',
]
