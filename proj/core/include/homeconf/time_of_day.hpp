#ifndef HOMECONF_TIME_OF_DAY_HPP
#define HOMECONF_TIME_OF_DAY_HPP

#include <compare>
#include <string>
#include <string_view>

namespace homeconf {

/// Time within a single day, stored as seconds since midnight. Minute
/// resolution is the norm; real-dataset records carry seconds.
class TimeOfDay {
public:
    TimeOfDay() = default;
    explicit TimeOfDay(int seconds);
    static TimeOfDay from_minutes(int minutes) { return TimeOfDay(minutes * 60); }

    /// Parses "HH:MM" or "HH:MM:SS" (hours may be one digit).
    static TimeOfDay parse(std::string_view text);

    int seconds() const { return seconds_; }
    int minutes() const { return seconds_ / 60; }

    /// "HH:MM", or "HH:MM:SS" when the seconds part is nonzero.
    std::string str() const;

    static TimeOfDay end_of_day() { return TimeOfDay(23 * 3600 + 59 * 60); }

    auto operator<=>(const TimeOfDay&) const = default;

private:
    int seconds_ = 0;
};

}  // namespace homeconf

#endif
