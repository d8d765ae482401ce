import os
from pathlib import Path


BASE_DIR = Path(__file__).resolve().parent.parent

try:
    from dotenv import load_dotenv
    # Load .env file from BASE_DIR explicitly
    env_path = BASE_DIR / '.env'
    load_dotenv(dotenv_path=env_path)
except ImportError:
    load_dotenv = None


# Only the management commands and the test runner use Django here,
# so there is no web-facing configuration.
SECRET_KEY = os.getenv('SECRET_KEY', 'bell4-local-key-not-used-for-signing')

DEBUG = os.getenv('DEBUG', 'False') == 'True'

ALLOWED_HOSTS = []

# Application definition

LOCAL_APPS = [
    'apps.qubits',
    'apps.bell',
    'apps.correlations',
    'apps.states',
    'apps.optimize',
    'apps.classify',
    'apps.runs',
]

DJANGO_APPS = [
    # rest_framework's default settings reference django.contrib.auth
    'django.contrib.contenttypes',
    'django.contrib.auth',
]

THIRD_PARTY_APPS = [
    'rest_framework',
]

INSTALLED_APPS = [
    *DJANGO_APPS,
    *THIRD_PARTY_APPS,
    *LOCAL_APPS,
]

# No database: every value is computed in memory
DATABASES = {}

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'

LANGUAGE_CODE = 'ru'

TIME_ZONE = 'Europe/Moscow'

USE_I18N = True

USE_TZ = True


# Numerical defaults (overridable from .env)

BELL4_VERSION = '1.0.0'

BELL4_THREADS = max(1, int(os.getenv('BELL4_THREADS', '1')))

BELL4_RESTARTS = int(os.getenv('BELL4_RESTARTS', '32'))
BELL4_MAX_SWEEPS = int(os.getenv('BELL4_MAX_SWEEPS', '200'))
BELL4_TOL = float(os.getenv('BELL4_TOL', '1e-9'))
BELL4_SEED = int(os.getenv('BELL4_SEED', '0'))

BELL4_CLASSIFY_TOLERANCE = float(os.getenv('BELL4_CLASSIFY_TOLERANCE', '1e-6'))

# Upper limit on enumerated cells of the grid oracle
BELL4_GRID_BUDGET = int(float(os.getenv('BELL4_GRID_BUDGET', '2e8')))

BELL4_RNG_ALGORITHM = 'numpy.PCG64'


LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'simple': {
            'format': '{asctime} {levelname} {name}: {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'simple',
        },
    },
    'loggers': {
        'apps': {
            'handlers': ['console'],
            'level': os.getenv('BELL4_LOG_LEVEL', 'WARNING'),
            'propagate': False,
        },
    },
}
