// A small job queue with retries and per-worker limits.
import { EventEmitter } from "events";

export interface Job {
  id: number;
  name: string;
  attempts: number;
  payload: unknown;
}

export interface QueueOptions {
  concurrency: number;
  maxAttempts: number;
  backoffMs: number;
}

const DEFAULTS: QueueOptions = { concurrency: 4, maxAttempts: 3, backoffMs: 250 };

export class TaskQueue extends EventEmitter {
  private pending: Job[] = [];
  private running = new Set<number>();
  private nextId = 1;
  private opts: QueueOptions;

  constructor(opts: Partial<QueueOptions> = {}) {
    super();
    this.opts = { ...DEFAULTS, ...opts };
  }

  push(name: string, payload: unknown): number {
    const id = this.nextId++;
    this.pending.push({ id, name, attempts: 0, payload });
    this.emit("queued", id);
    this.pump();
    return id;
  }

  size(): number {
    return this.pending.length + this.running.size;
  }

  private pump(): void {
    while (this.running.size < this.opts.concurrency) {
      const job = this.pending.shift();
      if (job === undefined) {
        break;
      }
      this.start(job);
    }
  }

  private start(job: Job): void {
    this.running.add(job.id);
    job.attempts += 1;
    const done = (err?: Error) => {
      this.running.delete(job.id);
      if (err === undefined) {
        this.emit("done", job.id);
      } else if (job.attempts < this.opts.maxAttempts) {
        const delay = this.opts.backoffMs * 2 ** (job.attempts - 1);
        setTimeout(() => {
          this.pending.push(job);
          this.pump();
        }, delay);
      } else {
        this.emit("failed", job.id, err);
      }
      this.pump();
    };
    try {
      this.emit("run", job, done);
    } catch (e) {
      done(e instanceof Error ? e : new Error(String(e)));
    }
  }

  drain(): Promise<void> {
    return new Promise((resolve) => {
      if (this.size() === 0) {
        resolve();
        return;
      }
      const check = () => {
        if (this.size() === 0) {
          this.off("done", check);
          this.off("failed", check);
          resolve();
        }
      };
      this.on("done", check);
      this.on("failed", check);
    });
  }
}
