/// <reference types="vitest/config" />
import { defineConfig } from "vite";

export default defineConfig({
  build: {
    outDir: "dist",
  },
  test: {
    environment: "happy-dom",
    globalSetup: "./tests/global-setup.ts",
    testTimeout: 30_000,
    hookTimeout: 120_000,
  },
});
