import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    environment: "happy-dom",
    environmentOptions: {
      happyDOM: {
        // tests talk to a sealing service spawned on a random local port,
        // which is cross-origin from the test page's point of view
        settings: { fetch: { disableSameOriginPolicy: true } },
      },
    },
    include: ["tests/**/*.test.ts"],
    testTimeout: 30_000,
    hookTimeout: 60_000,
  },
});
