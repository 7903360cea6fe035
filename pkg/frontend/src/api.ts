export interface SearchResult {
    id: number;
    phrase: string;
    similarity: number;
}

export interface SearchResponse {
    query: string;
    total: number;
    results: SearchResult[];
}

export interface PhraseMetadata {
    id: number;
    phrase: string;
    doc_freq: number;
    timeline: [number, number][];
    top_cpc: [string, number][];
    top_applicants: [string, number][];
    top_inventors: [string, number][];
}

export type SearchOutcome =
    | { kind: 'ok'; body: SearchResponse }
    | { kind: 'unknown'; suggestions: string[] }
    | { kind: 'error'; message: string };

export type MetaOutcome =
    | { kind: 'ok'; body: PhraseMetadata }
    | { kind: 'missing' }
    | { kind: 'error'; message: string };

/** Thin typed client over the search service; all UI data flows through it. */
export class ApiClient {
    constructor(private baseUrl: string = '') {}

    async search(query: string, offset: number, limit: number): Promise<SearchOutcome> {
        const params = new URLSearchParams({
            q: query,
            offset: String(offset),
            limit: String(limit),
        });
        let resp: Response;
        try {
            resp = await fetch(`${this.baseUrl}/api/search?${params}`);
        } catch (err) {
            return { kind: 'error', message: String(err) };
        }
        if (resp.status === 404) {
            const body = await resp.json();
            return { kind: 'unknown', suggestions: body.suggestions ?? [] };
        }
        if (!resp.ok) {
            return { kind: 'error', message: `search failed: HTTP ${resp.status}` };
        }
        return { kind: 'ok', body: await resp.json() };
    }

    async phraseMeta(phrase: string): Promise<MetaOutcome> {
        const params = new URLSearchParams({ q: phrase });
        let resp: Response;
        try {
            resp = await fetch(`${this.baseUrl}/api/phrase-by-text?${params}`);
        } catch (err) {
            return { kind: 'error', message: String(err) };
        }
        if (resp.status === 404) return { kind: 'missing' };
        if (!resp.ok) return { kind: 'error', message: `metadata failed: HTTP ${resp.status}` };
        return { kind: 'ok', body: await resp.json() };
    }
}

/** Server similarity values are 6-decimal; display them unchanged. */
export function formatSimilarity(value: number): string {
    return value.toFixed(6);
}
