import { ApiClient } from './api.js';
import { mountApp } from './app.js';

const base =
    new URLSearchParams(window.location.search).get('api') ??
    (window as unknown as { PKV_API_BASE?: string }).PKV_API_BASE ??
    'http://127.0.0.1:8000';

mountApp(new ApiClient(base));
