import os
from pathlib import Path
import environ

BASE_DIR = Path(__file__).resolve().parent.parent

# Environment
env = environ.Env(
    DEBUG=(bool, False),
    PANO360_DETERMINISTIC=(bool, True),
    PANO360_LARGE_HEIGHT=(int, 512),
    PANO360_VIEW_SIZE=(int, 256),
    PANO360_WORKERS=(int, 4),
)
environ.Env.read_env(os.path.join(BASE_DIR, '.env'))

SECRET_KEY = env('SECRET_KEY', default='django-insecure-dev-key-change-in-production')
DEBUG = env('DEBUG', default=False)
ALLOWED_HOSTS = []

# Applications
INSTALLED_APPS = [
    'apps.core',
    'apps.geometry',
    'apps.datasets',
    'apps.fov',
    'apps.synthesis',
    'apps.metrics',
]

# Batch tool: no database access anywhere in the pipeline
DATABASES = {}

# Internationalization
LANGUAGE_CODE = 'en-us'
TIME_ZONE = 'UTC'
USE_I18N = False
USE_TZ = True

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'

# Pipeline
PANO360_CACHE = env('PANO360_CACHE', default=None)
PANO360_RUNS_DIR = Path(env('PANO360_RUNS_DIR', default=str(BASE_DIR / 'runs')))

# Pyramid: large = H x 2H, medium = H/2, small = H/4
PANO360_LARGE_HEIGHT = env('PANO360_LARGE_HEIGHT')
PANO360_VIEW_SIZE = env('PANO360_VIEW_SIZE')

PANO360_FOV_SCALE_LAW = env('PANO360_FOV_SCALE_LAW', default='tangent')
PANO360_FILL = env('PANO360_FILL', default='gray')
PANO360_FOV_BINS = [float(b) for b in env.list('PANO360_FOV_BINS', default=['45', '50', '55', '60', '65', '70', '75'])]

PANO360_WORKERS = env('PANO360_WORKERS')
PANO360_DEVICE = env('PANO360_DEVICE', default='auto')
PANO360_DETERMINISTIC = env('PANO360_DETERMINISTIC')

# Logging - rich output on stderr, command results stay on stdout
LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'plain': {'format': '%(message)s', 'datefmt': '[%X]'},
    },
    'handlers': {
        'console': {
            '()': 'apps.core.logging.stderr_rich_handler',
            'formatter': 'plain',
        },
    },
    'loggers': {
        'apps': {
            'handlers': ['console'],
            'level': env('PANO360_LOG_LEVEL', default='INFO'),
            'propagate': False,
        },
    },
}
