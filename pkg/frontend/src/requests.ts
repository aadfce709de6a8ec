/**
 * Latest-only request channel: at most one logical request per UI control,
 * with stale responses discarded by sequence number. Whatever order the
 * network answers in, only the newest request's result is delivered.
 */
export class LatestOnly<T> {
  private seq = 0;
  private delivered = 0;

  /**
   * Issue a request; resolves with the result only if no newer request has
   * been issued on this channel by the time it lands (null otherwise).
   */
  async issue(run: () => Promise<T>): Promise<T | null> {
    const ticket = ++this.seq;
    const result = await run();
    if (ticket !== this.seq) {
      return null; // superseded while in flight
    }
    this.delivered = ticket;
    return result;
  }

  get inFlight(): boolean {
    return this.seq > this.delivered;
  }
}
