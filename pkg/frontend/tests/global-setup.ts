/**
 * Spawns a real concord service over a small fixture corpus before the
 * suite runs; every test talks HTTP to it. Requires the python package to
 * be installed (pip install -e ..); override the interpreter with
 * CONCORD_PYTHON.
 */

import { type ChildProcess, spawn, spawnSync } from "node:child_process";
import { mkdtempSync, rmSync, writeFileSync } from "node:fs";
import net from "node:net";
import { tmpdir } from "node:os";
import { join } from "node:path";
import type { TestProject } from "vitest/node";

declare module "vitest" {
  export interface ProvidedContext {
    serviceUrl: string;
  }
}

const MINI_VRT = [
  '<text id="t1" century="16">',
  "<s>",
  "isso\tP\tisso",
  "e\tPREP\te",
  "isso\tP\tisso",
  "</s>",
  "<s>",
  "casa\tNOM\tcasa",
  "isso\tP\tisso",
  "</s>",
  "</text>",
  '<text id="t2" century="17">',
  "<s>",
  "isso\tP\tisso",
  "vai\tV\tir",
  "</s>",
  "</text>",
  "",
].join("\n");

function freePort(): Promise<number> {
  return new Promise((resolve, reject) => {
    const probe = net.createServer();
    probe.once("error", reject);
    probe.listen(0, "127.0.0.1", () => {
      const address = probe.address();
      if (address === null || typeof address === "string") {
        reject(new Error("could not allocate a port"));
        return;
      }
      probe.close(() => resolve(address.port));
    });
  });
}

function runCli(python: string, args: string[], cwd: string): void {
  const result = spawnSync(python, ["-m", "concord.cli", ...args], {
    cwd,
    encoding: "utf-8",
  });
  if (result.status !== 0) {
    throw new Error(
      `concord ${args[0]} failed (${result.status}): ${result.stderr || result.stdout}`,
    );
  }
}

async function waitForService(url: string, child: ChildProcess): Promise<void> {
  const deadline = Date.now() + 60_000;
  let lastError: unknown = null;
  while (Date.now() < deadline) {
    if (child.exitCode !== null) {
      throw new Error(`service exited early with code ${child.exitCode}`);
    }
    try {
      const response = await fetch(url);
      if (response.ok) return;
    } catch (error) {
      lastError = error;
    }
    await new Promise((resolve) => setTimeout(resolve, 200));
  }
  throw new Error(`service did not come up at ${url}: ${String(lastError)}`);
}

let child: ChildProcess | null = null;
let workdir: string | null = null;

export default async function setup(project: TestProject): Promise<() => Promise<void>> {
  const python = process.env.CONCORD_PYTHON ?? "python3";
  workdir = mkdtempSync(join(tmpdir(), "concord-ui-"));
  const registry = join(workdir, "registry");
  writeFileSync(join(workdir, "mini.vrt"), MINI_VRT, "utf-8");
  runCli(python, [
    "encode", join(workdir, "mini.vrt"),
    "-d", join(workdir, "data"), "-R", registry,
    "-P", "pos", "-P", "lemma", "-S", "s",
  ], workdir);
  runCli(python, [
    "subcorpus", "create", "MINI", "cent16", "-R", registry, "--where", "century=16",
  ], workdir);

  const port = await freePort();
  child = spawn(
    python,
    ["-m", "concord.cli", "serve", "-R", registry, "--port", String(port)],
    { stdio: ["ignore", "pipe", "pipe"] },
  );
  const serviceUrl = `http://127.0.0.1:${port}`;
  await waitForService(`${serviceUrl}/corpora`, child);
  project.provide("serviceUrl", serviceUrl);

  return async () => {
    if (child && child.exitCode === null) {
      child.kill("SIGTERM");
      await new Promise((resolve) => setTimeout(resolve, 300));
      if (child.exitCode === null) child.kill("SIGKILL");
    }
    if (workdir) rmSync(workdir, { recursive: true, force: true });
  };
}
