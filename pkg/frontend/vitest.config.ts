import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    include: ["tests/**/*.test.ts"],
    testTimeout: 20_000,
    hookTimeout: 40_000,
    // the e2e spec owns one service process; keep files sequential
    fileParallelism: false,
  },
});
