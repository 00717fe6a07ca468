#include "hfirst/glyphs.hpp"

#include <array>
#include <cctype>

#include "hfirst/errors.hpp"

namespace hfirst {

namespace {

// 5x7 dot-matrix font, one byte per row, bit 4 = leftmost column.
struct GlyphRows {
    char c;
    std::array<std::uint8_t, 7> rows;
};

constexpr std::array<GlyphRows, 36> kFont = {{
    {'0', {0x0E, 0x11, 0x13, 0x15, 0x19, 0x11, 0x0E}},
    {'1', {0x04, 0x0C, 0x04, 0x04, 0x04, 0x04, 0x0E}},
    {'2', {0x0E, 0x11, 0x01, 0x02, 0x04, 0x08, 0x1F}},
    {'3', {0x1F, 0x02, 0x04, 0x02, 0x01, 0x11, 0x0E}},
    {'4', {0x02, 0x06, 0x0A, 0x12, 0x1F, 0x02, 0x02}},
    {'5', {0x1F, 0x10, 0x1E, 0x01, 0x01, 0x11, 0x0E}},
    {'6', {0x06, 0x08, 0x10, 0x1E, 0x11, 0x11, 0x0E}},
    {'7', {0x1F, 0x01, 0x02, 0x04, 0x08, 0x08, 0x08}},
    {'8', {0x0E, 0x11, 0x11, 0x0E, 0x11, 0x11, 0x0E}},
    {'9', {0x0E, 0x11, 0x11, 0x0F, 0x01, 0x02, 0x0C}},
    {'A', {0x0E, 0x11, 0x11, 0x1F, 0x11, 0x11, 0x11}},
    {'B', {0x1E, 0x11, 0x11, 0x1E, 0x11, 0x11, 0x1E}},
    {'C', {0x0E, 0x11, 0x10, 0x10, 0x10, 0x11, 0x0E}},
    {'D', {0x1C, 0x12, 0x11, 0x11, 0x11, 0x12, 0x1C}},
    {'E', {0x1F, 0x10, 0x10, 0x1E, 0x10, 0x10, 0x1F}},
    {'F', {0x1F, 0x10, 0x10, 0x1E, 0x10, 0x10, 0x10}},
    {'G', {0x0E, 0x11, 0x10, 0x17, 0x11, 0x11, 0x0F}},
    {'H', {0x11, 0x11, 0x11, 0x1F, 0x11, 0x11, 0x11}},
    {'I', {0x0E, 0x04, 0x04, 0x04, 0x04, 0x04, 0x0E}},
    {'J', {0x07, 0x02, 0x02, 0x02, 0x02, 0x12, 0x0C}},
    {'K', {0x11, 0x12, 0x14, 0x18, 0x14, 0x12, 0x11}},
    {'L', {0x10, 0x10, 0x10, 0x10, 0x10, 0x10, 0x1F}},
    {'M', {0x11, 0x1B, 0x15, 0x15, 0x11, 0x11, 0x11}},
    {'N', {0x11, 0x11, 0x19, 0x15, 0x13, 0x11, 0x11}},
    {'O', {0x0E, 0x11, 0x11, 0x11, 0x11, 0x11, 0x0E}},
    {'P', {0x1E, 0x11, 0x11, 0x1E, 0x10, 0x10, 0x10}},
    {'Q', {0x0E, 0x11, 0x11, 0x11, 0x15, 0x12, 0x0D}},
    {'R', {0x1E, 0x11, 0x11, 0x1E, 0x14, 0x12, 0x11}},
    {'S', {0x0F, 0x10, 0x10, 0x0E, 0x01, 0x01, 0x1E}},
    {'T', {0x1F, 0x04, 0x04, 0x04, 0x04, 0x04, 0x04}},
    {'U', {0x11, 0x11, 0x11, 0x11, 0x11, 0x11, 0x0E}},
    {'V', {0x11, 0x11, 0x11, 0x11, 0x11, 0x0A, 0x04}},
    {'W', {0x11, 0x11, 0x11, 0x15, 0x15, 0x15, 0x0A}},
    {'X', {0x11, 0x11, 0x0A, 0x04, 0x0A, 0x11, 0x11}},
    {'Y', {0x11, 0x11, 0x11, 0x0A, 0x04, 0x04, 0x04}},
    {'Z', {0x1F, 0x01, 0x02, 0x04, 0x08, 0x10, 0x1F}},
}};

const GlyphRows* find_glyph(char c) {
    const char u = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    for (const GlyphRows& g : kFont) {
        if (g.c == u) return &g;
    }
    return nullptr;
}

} // namespace

const std::vector<std::string>& glyph_labels() {
    static const std::vector<std::string> labels = [] {
        std::vector<std::string> v;
        v.reserve(kFont.size());
        for (const GlyphRows& g : kFont) v.emplace_back(1, g.c);
        return v;
    }();
    return labels;
}

bool is_glyph_label(const std::string& label) { return label.size() == 1 && find_glyph(label[0]) != nullptr; }

Sprite glyph_sprite(char c, int scale, double ink, double background) {
    const GlyphRows* g = find_glyph(c);
    if (g == nullptr) {
        throw ValidationError(std::string("no built-in glyph for character '") + c + "'");
    }
    if (scale < 1) throw ValidationError("glyph scale must be at least 1");

    Sprite s;
    s.width = 5 * scale;
    s.height = 7 * scale;
    s.background = background;
    s.intensity.assign(static_cast<std::size_t>(s.width) * s.height, background);

    const auto cell = [&](int row, int col) {
        if (row < 0 || row >= 7 || col < 0 || col >= 5) return false;
        return (g->rows[static_cast<std::size_t>(row)] >> (4 - col) & 1) != 0;
    };

    // Dot-matrix rendering: each set cell becomes a disc, and diagonally
    // adjacent cells get a joining disc at the shared corner. Compared to
    // filled squares this breaks long straight edges into short scalloped
    // arcs, spreading responses across orientations the way printed
    // characters do, and keeps event bursts from whole edges crossing a
    // pixel column in lockstep.
#ifdef HFIRST_SQUARE_FONT
    for (int row = 0; row < 7; ++row)
        for (int col = 0; col < 5; ++col)
            if (cell(row, col))
                for (int y = row * scale; y < (row + 1) * scale; ++y)
                    for (int x = col * scale; x < (col + 1) * scale; ++x)
                        s.intensity[static_cast<std::size_t>(y) * s.width + x] = ink;
    s.validate();
    return s;
#endif
    const double radius = 0.45 * scale;
    const auto disc = [&](double cyp, double cxp) {
        const int y0p = std::max(0, static_cast<int>(cyp - radius - 1.0));
        const int y1p = std::min(s.height - 1, static_cast<int>(cyp + radius + 1.0));
        const int x0p = std::max(0, static_cast<int>(cxp - radius - 1.0));
        const int x1p = std::min(s.width - 1, static_cast<int>(cxp + radius + 1.0));
        for (int y = y0p; y <= y1p; ++y) {
            for (int x = x0p; x <= x1p; ++x) {
                const double dy = y + 0.5 - cyp;
                const double dx = x + 0.5 - cxp;
                if (dy * dy + dx * dx <= radius * radius) {
                    s.intensity[static_cast<std::size_t>(y) * s.width + x] = ink;
                }
            }
        }
    };

    for (int row = 0; row < 7; ++row) {
        for (int col = 0; col < 5; ++col) {
            if (cell(row, col)) disc((row + 0.5) * scale, (col + 0.5) * scale);
        }
    }
    for (int row = 0; row < 6; ++row) {
        for (int col = 0; col < 4; ++col) {
            const bool tl = cell(row, col), tr = cell(row, col + 1);
            const bool bl = cell(row + 1, col), br = cell(row + 1, col + 1);
            if ((tl && br && !tr && !bl) || (tr && bl && !tl && !br)) {
                disc(double(row + 1) * scale, double(col + 1) * scale);
            }
        }
    }
    s.validate();
    return s;
}

} // namespace hfirst
