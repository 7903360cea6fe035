import { ApiClient, PhraseMetadata, formatSimilarity } from './api.js';
import { exportFavoritesText, isFavorite, loadFavorites, toggleFavorite } from './favorites.js';
import { PAGE_SIZE, ResultList, appendPage, createResultList, nextOffset } from './results.js';

interface AppElements {
    input: HTMLInputElement;
    searchButton: HTMLElement;
    resultsList: HTMLElement;
    suggestions: HTMLElement;
    errorBanner: HTMLElement;
    metaPanel: HTMLElement;
    favoritesList: HTMLElement;
    exportButton: HTMLElement;
}

export class App {
    private list: ResultList | null = null;
    // bumped on every new query; stale in-flight pagination is dropped
    private generation = 0;
    private loading = false;

    constructor(private api: ApiClient, private el: AppElements) {
        el.input.addEventListener('keydown', (event) => {
            if ((event as KeyboardEvent).key === 'Enter') void this.submitSearch(el.input.value);
        });
        el.searchButton.addEventListener('click', () => void this.submitSearch(el.input.value));
        el.exportButton.addEventListener('click', () => this.exportFavorites());
        this.renderFavorites();
    }

    async submitSearch(text: string): Promise<void> {
        const query = text.trim();
        if (!query) return;
        const generation = ++this.generation;
        this.el.input.value = query;
        const outcome = await this.api.search(query, 0, PAGE_SIZE);
        if (generation !== this.generation) return;
        this.clearSuggestions();
        if (outcome.kind === 'error') {
            this.showError(outcome.message, () => void this.submitSearch(query));
            return;
        }
        this.hideError();
        if (outcome.kind === 'unknown') {
            this.list = null;
            this.el.resultsList.innerHTML = '';
            this.renderSuggestions(outcome.suggestions);
            return;
        }
        this.list = appendPage(createResultList(outcome.body.query), outcome.body.results, outcome.body.total);
        this.renderRows();
        void this.loadMetadata(outcome.body.query);
    }

    /** Requests the next offset; stops once a short page arrives. */
    async loadNextPage(): Promise<void> {
        if (!this.list || this.list.exhausted || this.loading) return;
        const generation = this.generation;
        this.loading = true;
        const outcome = await this.api.search(this.list.query, nextOffset(this.list), PAGE_SIZE);
        this.loading = false;
        if (generation !== this.generation || !this.list) return;
        if (outcome.kind === 'error') {
            this.showError(outcome.message, () => void this.loadNextPage());
            return;
        }
        this.hideError();
        if (outcome.kind === 'unknown') return;
        this.list = appendPage(this.list, outcome.body.results, outcome.body.total);
        this.renderRows();
    }

    private renderRows(): void {
        if (!this.list) return;
        this.el.resultsList.innerHTML = '';
        for (const row of this.list.rows) {
            const li = document.createElement('li');
            li.className = 'result-row';
            li.dataset.id = String(row.id);

            const star = document.createElement('button');
            star.className = 'star';
            star.textContent = isFavorite(row.phrase) ? '★' : '☆';
            star.addEventListener('click', (event) => {
                event.stopPropagation();
                toggleFavorite(row.phrase);
                star.textContent = isFavorite(row.phrase) ? '★' : '☆';
                this.renderFavorites();
            });

            const phrase = document.createElement('span');
            phrase.className = 'phrase';
            phrase.textContent = row.phrase;

            const sim = document.createElement('span');
            sim.className = 'similarity';
            sim.textContent = formatSimilarity(row.similarity);

            li.append(star, phrase, sim);
            // clicking a result starts a new search for that phrase
            li.addEventListener('click', () => void this.submitSearch(row.phrase));
            this.el.resultsList.appendChild(li);
        }
    }

    private renderSuggestions(suggestions: string[]): void {
        this.el.suggestions.innerHTML = '';
        if (!suggestions.length) {
            this.el.suggestions.textContent = 'No matches.';
            return;
        }
        for (const text of suggestions) {
            const chip = document.createElement('button');
            chip.className = 'suggestion-chip';
            chip.textContent = text;
            chip.addEventListener('click', () => void this.submitSearch(text));
            this.el.suggestions.appendChild(chip);
        }
    }

    private clearSuggestions(): void {
        this.el.suggestions.innerHTML = '';
    }

    private async loadMetadata(phrase: string): Promise<void> {
        const generation = this.generation;
        const outcome = await this.api.phraseMeta(phrase);
        if (generation !== this.generation) return;
        if (outcome.kind === 'ok') {
            this.renderMetadata(outcome.body);
        } else {
            this.el.metaPanel.innerHTML = '';
            this.el.metaPanel.textContent = 'no metadata';
        }
    }

    private renderMetadata(meta: PhraseMetadata): void {
        const panel = this.el.metaPanel;
        panel.innerHTML = '';

        const title = document.createElement('h2');
        title.textContent = meta.phrase;
        panel.appendChild(title);

        const timeline = document.createElement('div');
        timeline.className = 'timeline';
        const maxCount = Math.max(1, ...meta.timeline.map(([, count]) => count));
        for (const [year, count] of meta.timeline) {
            const bar = document.createElement('div');
            bar.className = 'timeline-bar';
            bar.style.height = `${Math.round((count / maxCount) * 100)}%`;
            bar.title = `${year}: ${count}`;
            bar.dataset.year = String(year);
            bar.dataset.count = String(count);
            timeline.appendChild(bar);
        }
        panel.appendChild(timeline);

        const section = (heading: string, cls: string, items: [string, number][]) => {
            const h = document.createElement('h3');
            h.textContent = heading;
            panel.appendChild(h);
            const ul = document.createElement('ul');
            ul.className = cls;
            for (const [label, count] of items) {
                const li = document.createElement('li');
                li.textContent = `${label} (${count})`;
                ul.appendChild(li);
            }
            panel.appendChild(ul);
        };
        section('Technology classes', 'meta-cpc', meta.top_cpc);
        section('Applicants', 'meta-applicants', meta.top_applicants);
        section('Inventors', 'meta-inventors', meta.top_inventors);
    }

    private renderFavorites(): void {
        this.el.favoritesList.innerHTML = '';
        for (const phrase of loadFavorites()) {
            const li = document.createElement('li');
            li.textContent = phrase;
            li.addEventListener('click', () => void this.submitSearch(phrase));
            this.el.favoritesList.appendChild(li);
        }
    }

    private exportFavorites(): void {
        const text = exportFavoritesText();
        const blob = new Blob([text], { type: 'text/plain' });
        const link = document.createElement('a');
        link.href = URL.createObjectURL(blob);
        link.download = 'favorites.txt';
        link.click();
        URL.revokeObjectURL(link.href);
    }

    private showError(message: string, retry: () => void): void {
        const banner = this.el.errorBanner;
        banner.innerHTML = '';
        banner.classList.add('visible');
        const span = document.createElement('span');
        span.textContent = `Request failed: ${message}`;
        const button = document.createElement('button');
        button.className = 'retry';
        button.textContent = 'Retry';
        button.addEventListener('click', retry);
        banner.append(span, button);
    }

    private hideError(): void {
        this.el.errorBanner.classList.remove('visible');
        this.el.errorBanner.innerHTML = '';
    }
}

export function mountApp(api: ApiClient, root: Document = document): App {
    const byId = (id: string) => {
        const el = root.getElementById(id);
        if (!el) throw new Error(`missing element #${id}`);
        return el;
    };
    const app = new App(api, {
        input: byId('search-input') as HTMLInputElement,
        searchButton: byId('search-button'),
        resultsList: byId('results-list'),
        suggestions: byId('suggestions'),
        errorBanner: byId('error-banner'),
        metaPanel: byId('meta-panel'),
        favoritesList: byId('favorites-list'),
        exportButton: byId('favorites-export'),
    });
    const sentinelHost = byId('results-pane');
    sentinelHost.addEventListener('scroll', () => {
        const nearBottom =
            sentinelHost.scrollTop + sentinelHost.clientHeight >= sentinelHost.scrollHeight - 80;
        if (nearBottom) void app.loadNextPage();
    });
    return app;
}
