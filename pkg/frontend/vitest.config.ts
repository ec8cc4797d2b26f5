import { defineConfig } from 'vitest/config';

export default defineConfig({
  test: {
    environment: 'happy-dom',
    environmentOptions: {
      // an origin on the API's default CORS allow list, so the DOM session
      // talks to the replay server the way a dev-served page would
      happyDOM: { url: 'http://localhost:5173/' },
    },
    include: ['tests/**/*.test.ts'],
    // integration files boot the API process; give them room
    testTimeout: 120_000,
    hookTimeout: 120_000,
  },
});
