# ris_project/settings.py

from pathlib import Path
import os
import dj_database_url
from dotenv import load_dotenv

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

# Load .env file (for local runs primarily)
load_dotenv(os.path.join(BASE_DIR, '.env'))

# SECURITY WARNING: keep the secret key used in production secret!
SECRET_KEY = os.environ.get('SECRET_KEY', 'insecure-local-simulation-key')

# DEBUG automatically False unless explicitly 'True' in environment
DEBUG = os.environ.get('DEBUG', 'True') == 'True'

ALLOWED_HOSTS_STR = os.environ.get('ALLOWED_HOSTS', 'localhost,127.0.0.1')
ALLOWED_HOSTS = [host.strip() for host in ALLOWED_HOSTS_STR.split(',') if host.strip()]

# Application definition

INSTALLED_APPS = [
    'django.contrib.admin',
    'django.contrib.auth',
    'django.contrib.contenttypes',
    'django.contrib.sessions',
    'django.contrib.messages',
    'whitenoise.runserver_nostatic',
    'django.contrib.staticfiles',

    # Third-party apps
    'django_filters',

    # Simulation apps
    'core.apps.CoreConfig',
    'geometry.apps.GeometryConfig',
    'channel.apps.ChannelConfig',
    'training.apps.TrainingConfig',
    'nomp.apps.NompAppConfig',
    'positioning.apps.PositioningConfig',
    'customization.apps.CustomizationConfig',
    'downlink.apps.DownlinkConfig',
    'metrics.apps.MetricsConfig',
    'campaigns.apps.CampaignsConfig',
]

MIDDLEWARE = [
    'django.middleware.security.SecurityMiddleware',
    'whitenoise.middleware.WhiteNoiseMiddleware',  # Whitenoise middleware (after Security)
    'django.contrib.sessions.middleware.SessionMiddleware',
    'django.middleware.common.CommonMiddleware',
    'django.middleware.csrf.CsrfViewMiddleware',
    'django.contrib.auth.middleware.AuthenticationMiddleware',
    'django.contrib.messages.middleware.MessageMiddleware',
    'django.middleware.clickjacking.XFrameOptionsMiddleware',
]

ROOT_URLCONF = 'ris_project.urls'

TEMPLATES = [
    {
        'BACKEND': 'django.template.backends.django.DjangoTemplates',
        'DIRS': [],
        'APP_DIRS': True,
        'OPTIONS': {
            'context_processors': [
                'django.template.context_processors.debug',
                'django.template.context_processors.request',
                'django.contrib.auth.context_processors.auth',
                'django.contrib.messages.context_processors.messages',
            ],
        },
    },
]

WSGI_APPLICATION = 'ris_project.wsgi.application'

# Database (Using dj-database-url for flexibility; campaign records only)
DATABASES = {
    'default': dj_database_url.config(
        default=f"sqlite:///{BASE_DIR / 'db.sqlite3'}",
        conn_max_age=600,
    )
}

# Password validation
AUTH_PASSWORD_VALIDATORS = [
    {'NAME': 'django.contrib.auth.password_validation.UserAttributeSimilarityValidator'},
    {'NAME': 'django.contrib.auth.password_validation.MinimumLengthValidator'},
    {'NAME': 'django.contrib.auth.password_validation.CommonPasswordValidator'},
    {'NAME': 'django.contrib.auth.password_validation.NumericPasswordValidator'},
]

# Internationalization
LANGUAGE_CODE = 'en-us'
TIME_ZONE = 'UTC'
USE_I18N = True
USE_TZ = True

# Static files (admin only) - served by Whitenoise
STATIC_URL = '/static/'
STATIC_ROOT = os.path.join(BASE_DIR, 'staticfiles')
STORAGES = {
    "default": {
        "BACKEND": "django.core.files.storage.FileSystemStorage",
    },
    "staticfiles": {
        "BACKEND": "whitenoise.storage.CompressedStaticFilesStorage",
    },
}

# Default primary key field type
DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'

# ==============================================================================
# SIMULATION DEFAULTS
# ==============================================================================
RIS_SIMULATION = {
    'DEFAULT_TRIALS': int(os.environ.get('RIS_DEFAULT_TRIALS', 500)),
    'DEFAULT_SEED': int(os.environ.get('RIS_DEFAULT_SEED', 2024)),
    'THREADS': int(os.environ.get('RIS_THREADS', 1)),
    'OUTPUT_DIR': os.environ.get('RIS_OUTPUT_DIR', str(BASE_DIR / 'results')),
    'RECIPES_DIR': str(BASE_DIR / 'campaigns' / 'recipes'),
    'DEFAULT_SCENARIO': str(BASE_DIR / 'campaigns' / 'recipes' / 'scenario_default.yaml'),
}

# ==============================================================================
# LOGGING
# ==============================================================================
RIS_LOG_LEVEL = os.environ.get('RIS_LOG_LEVEL', 'INFO').upper()

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '{asctime} {levelname} {name} {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'verbose',
        },
    },
    'root': {
        'handlers': ['console'],
        'level': 'WARNING',
    },
    'loggers': {
        name: {'handlers': ['console'], 'level': RIS_LOG_LEVEL, 'propagate': False}
        for name in (
            'core', 'geometry', 'channel', 'training', 'nomp', 'positioning',
            'customization', 'downlink', 'metrics', 'campaigns',
        )
    },
}
