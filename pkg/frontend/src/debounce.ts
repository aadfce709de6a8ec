/**
 * Trailing-edge debounce so slider drags hit the service at a bounded rate.
 * The returned function also exposes cancel() and flush() for teardown and
 * deterministic tests.
 */
export const SLIDER_DEBOUNCE_MS = 150;

export function debounce<T extends (...args: Parameters<T>) => void>(
  fn: T,
  delay: number = SLIDER_DEBOUNCE_MS,
): T & { cancel: () => void; flush: () => void } {
  let timer: ReturnType<typeof setTimeout> | null = null;
  let pending: Parameters<T> | null = null;

  const debounced = ((...args: Parameters<T>) => {
    pending = args;
    if (timer) {
      clearTimeout(timer);
    }
    timer = setTimeout(() => {
      timer = null;
      const args = pending as Parameters<T>;
      pending = null;
      fn(...args);
    }, delay);
  }) as T & { cancel: () => void; flush: () => void };

  debounced.cancel = () => {
    if (timer) {
      clearTimeout(timer);
      timer = null;
    }
    pending = null;
  };

  debounced.flush = () => {
    if (timer && pending) {
      clearTimeout(timer);
      timer = null;
      const args = pending as Parameters<T>;
      pending = null;
      fn(...args);
    }
  };

  return debounced;
}
