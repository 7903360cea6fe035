export const FAVORITES_KEY = 'pkv_favorites';

export function loadFavorites(): string[] {
    try {
        const raw = localStorage.getItem(FAVORITES_KEY);
        if (!raw) return [];
        const parsed = JSON.parse(raw);
        if (!Array.isArray(parsed)) return [];
        return parsed.filter((entry) => typeof entry === 'string');
    } catch {
        return [];
    }
}

function save(favorites: string[]): void {
    localStorage.setItem(FAVORITES_KEY, JSON.stringify(favorites));
}

/** Add if absent, remove if present; insertion order preserved. */
export function toggleFavorite(phrase: string): string[] {
    const favorites = loadFavorites();
    const next = favorites.includes(phrase)
        ? favorites.filter((entry) => entry !== phrase)
        : [...favorites, phrase];
    save(next);
    return next;
}

export function isFavorite(phrase: string): boolean {
    return loadFavorites().includes(phrase);
}

/** Plain-text export, one phrase per line. */
export function exportFavoritesText(): string {
    return loadFavorites().join('\n');
}
