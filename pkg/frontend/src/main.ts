import { createApi } from './api.js';
import { bootstrap } from './app.js';
import { resolveBaseUrl } from './config.js';

const root = document.getElementById('app');
if (!root) {
  throw new Error('missing #app container');
}
bootstrap(root, createApi(resolveBaseUrl(window)));
