// Deployment configuration: point the UI at a vsim service. A ?api=<url>
// query parameter overrides this value at runtime.
window.VSIM_API_BASE = 'http://localhost:8040';
