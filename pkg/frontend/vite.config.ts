import { defineConfig } from "vitest/config";

// The studio is static; API calls go to the voxgram server. During
// development the /api prefix is proxied to a locally running
// `voxgram serve` (default port 8571).
export default defineConfig({
  server: {
    proxy: {
      "/api": {
        target: process.env.VOXGRAM_API ?? "http://127.0.0.1:8571",
        changeOrigin: true,
        rewrite: (path) => path.replace(/^\/api/, ""),
      },
    },
  },
  test: {
    environment: "node",
    include: ["test/**/*.test.ts"],
    testTimeout: 30000,
    hookTimeout: 60000,
  },
});
