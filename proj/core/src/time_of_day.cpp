#include "homeconf/time_of_day.hpp"

#include <cctype>
#include <cstdio>
#include <stdexcept>

namespace homeconf {

TimeOfDay::TimeOfDay(int seconds) : seconds_(seconds) {
    if (seconds < 0 || seconds >= 24 * 3600)
        throw std::invalid_argument("time of day out of range: " + std::to_string(seconds));
}

TimeOfDay TimeOfDay::parse(std::string_view text) {
    int parts[3] = {0, 0, 0};
    int n = 0;
    int cur = 0;
    bool have_digit = false;
    for (char c : text) {
        if (std::isdigit(static_cast<unsigned char>(c))) {
            cur = cur * 10 + (c - '0');
            have_digit = true;
        } else if (c == ':') {
            if (!have_digit || n >= 2)
                throw std::invalid_argument("bad time '" + std::string(text) + "'");
            parts[n++] = cur;
            cur = 0;
            have_digit = false;
        } else {
            throw std::invalid_argument("bad time '" + std::string(text) + "'");
        }
    }
    if (!have_digit || n < 1)
        throw std::invalid_argument("bad time '" + std::string(text) + "'");
    parts[n] = cur;
    int h = parts[0], m = parts[1], s = (n == 2) ? parts[2] : 0;
    if (h > 23 || m > 59 || s > 59)
        throw std::invalid_argument("bad time '" + std::string(text) + "'");
    return TimeOfDay(h * 3600 + m * 60 + s);
}

std::string TimeOfDay::str() const {
    char buf[16];
    int h = seconds_ / 3600, m = (seconds_ / 60) % 60, s = seconds_ % 60;
    if (s == 0)
        std::snprintf(buf, sizeof buf, "%02d:%02d", h, m);
    else
        std::snprintf(buf, sizeof buf, "%02d:%02d:%02d", h, m, s);
    return buf;
}

}  // namespace homeconf
