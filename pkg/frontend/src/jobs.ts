/**
 * Enrichment job polling. Submission is non-blocking server-side, so
 * the client polls the job id until it settles. Plain polling, one
 * request a second, bounded; no push channel.
 */

import { ApiClient, JobView } from "./api.js";

export interface PollOptions {
  intervalMs?: number;
  maxPolls?: number;
  onUpdate?: (job: JobView) => void;
}

const DEFAULT_INTERVAL_MS = 1000;
const DEFAULT_MAX_POLLS = 120;

function sleep(ms: number): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, ms));
}

/**
 * Poll until the job reports `done` or `failed` and return that final
 * view. Throws if the poll budget runs out first; `failed` is a normal
 * return, not an exception, so callers can render the diagnostic.
 */
export async function pollJob(
  api: ApiClient,
  jobId: string,
  options: PollOptions = {},
): Promise<JobView> {
  const interval = options.intervalMs ?? DEFAULT_INTERVAL_MS;
  const maxPolls = options.maxPolls ?? DEFAULT_MAX_POLLS;
  for (let polls = 0; polls < maxPolls; polls += 1) {
    const job = await api.enrichmentStatus(jobId);
    options.onUpdate?.(job);
    if (job.status === "done" || job.status === "failed") return job;
    await sleep(interval);
  }
  throw new Error(`job ${jobId} still running after ${maxPolls} polls`);
}
