#include "hfirst/event.hpp"

#include "hfirst/log.hpp"

namespace hfirst {

void Sprite::validate() const {
    if (width < 1 || height < 1 || intensity.size() != static_cast<std::size_t>(width) * height)
        throw ValidationError("sprite grid is degenerate or inconsistent with its dimensions");
    if (background < 0.0) throw ValidationError("sprite background intensity is negative");
    bool differs = false;
    for (double v : intensity) {
        if (v < 0.0) throw ValidationError("sprite contains a negative intensity");
        differs = differs || v != background;
    }
    if (!differs)
        log::warn("sprite is indistinguishable from its background; it will emit no events");
}

bool is_sorted_by_time(const std::vector<Event>& events) {
    for (std::size_t i = 1; i < events.size(); ++i)
        if (events[i].t < events[i - 1].t) return false;
    return true;
}

} // namespace hfirst
