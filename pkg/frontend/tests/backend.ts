// Spawns the real Python backend for UI tests and tears it down after.

import { spawn, type ChildProcess } from "node:child_process";
import { mkdtempSync, writeFileSync } from "node:fs";
import net from "node:net";
import { tmpdir } from "node:os";
import { join } from "node:path";

export interface Backend {
  baseUrl: string;
  stop(): Promise<void>;
}

function freePort(): Promise<number> {
  return new Promise((resolve, reject) => {
    const server = net.createServer();
    server.listen(0, "127.0.0.1", () => {
      const address = server.address();
      if (address && typeof address === "object") {
        const port = address.port;
        server.close(() => resolve(port));
      } else {
        reject(new Error("no port assigned"));
      }
    });
  });
}

const sleep = (ms: number) => new Promise((resolve) => setTimeout(resolve, ms));

export async function startBackend(overrides: Record<string, unknown> = {}): Promise<Backend> {
  const port = await freePort();
  const dir = mkdtempSync(join(tmpdir(), "plantutor-ui-"));
  const config = {
    host: "127.0.0.1",
    port,
    data_dir: join(dir, "data"),
    hint_rng_seed: 11,
    ...overrides,
  };
  const configPath = join(dir, "config.json");
  writeFileSync(configPath, JSON.stringify(config));

  const child: ChildProcess = spawn("plantutor", ["serve", "--config", configPath], {
    stdio: ["ignore", "pipe", "pipe"],
  });
  const baseUrl = `http://127.0.0.1:${port}`;

  for (let attempt = 0; attempt < 150; attempt++) {
    if (child.exitCode !== null) break;
    try {
      const response = await fetch(`${baseUrl}/api/domains`);
      if (response.ok) {
        return {
          baseUrl,
          stop: async () => {
            child.kill("SIGTERM");
            await sleep(100);
            if (child.exitCode === null) child.kill("SIGKILL");
          },
        };
      }
    } catch {
      // not up yet
    }
    await sleep(100);
  }
  child.kill("SIGKILL");
  throw new Error("backend did not start");
}
