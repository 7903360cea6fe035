import { SearchResult } from './api.js';

export const PAGE_SIZE = 20;

/** Accumulated result list for one active query. */
export interface ResultList {
    query: string;
    rows: SearchResult[];
    seenIds: Set<number>;
    total: number;
    exhausted: boolean;
}

export function createResultList(query: string): ResultList {
    return { query, rows: [], seenIds: new Set(), total: 0, exhausted: false };
}

/**
 * Append one server page without reordering existing rows. Appending is
 * idempotent per phrase id, so a retried page cannot duplicate rows.
 * A short page marks the list exhausted.
 */
export function appendPage(
    list: ResultList,
    results: SearchResult[],
    total: number,
    pageSize: number = PAGE_SIZE,
): ResultList {
    const fresh = results.filter((r) => !list.seenIds.has(r.id));
    for (const r of fresh) list.seenIds.add(r.id);
    return {
        query: list.query,
        rows: [...list.rows, ...fresh],
        seenIds: list.seenIds,
        total,
        exhausted: results.length < pageSize || list.rows.length + fresh.length >= total,
    };
}

export function nextOffset(list: ResultList): number {
    return list.rows.length;
}
