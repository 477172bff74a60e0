//! Civil UTC time, for the `Wed Jul 27 09:11:28 UTC 2016` timestamp style
//! used by the factory event logs.

use alloc::format;
use alloc::string::String;

const MONTHS: [&str; 12] = [
    "Jan", "Feb", "Mar", "Apr", "May", "Jun", "Jul", "Aug", "Sep", "Oct", "Nov", "Dec",
];
const WEEKDAYS: [&str; 7] = ["Sun", "Mon", "Tue", "Wed", "Thu", "Fri", "Sat"];

/// A second-resolution instant in the proleptic Gregorian calendar, UTC.
///
/// The derived ordering is chronological.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) struct CivilTime {
    pub year: i64,
    pub month: u8,
    pub day: u8,
    pub hour: u8,
    pub minute: u8,
    pub second: u8,
}

/// Days since 1970-01-01.
fn days_from_civil(year: i64, month: u8, day: u8) -> i64 {
    let y = if month <= 2 { year - 1 } else { year };
    let era = y.div_euclid(400);
    let yoe = y - era * 400;
    let mp = i64::from((month + 9) % 12);
    let doy = (153 * mp + 2) / 5 + i64::from(day) - 1;
    let doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    era * 146097 + doe - 719468
}

fn civil_from_days(days: i64) -> (i64, u8, u8) {
    let z = days + 719468;
    let era = z.div_euclid(146097);
    let doe = z - era * 146097;
    let yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    let doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    let mp = (5 * doy + 2) / 153;
    let day = (doy - (153 * mp + 2) / 5 + 1) as u8;
    let month = ((mp + 2) % 12 + 1) as u8;
    let year = yoe + era * 400 + i64::from(month <= 2);
    (year, month, day)
}

pub(crate) fn civil_from_millis(millis: u64) -> CivilTime {
    let total_seconds = (millis / 1000) as i64;
    let days = total_seconds.div_euclid(86400);
    let secs_of_day = total_seconds.rem_euclid(86400);
    let (year, month, day) = civil_from_days(days);
    CivilTime {
        year,
        month,
        day,
        hour: (secs_of_day / 3600) as u8,
        minute: (secs_of_day % 3600 / 60) as u8,
        second: (secs_of_day % 60) as u8,
    }
}

#[cfg(test)]
pub(crate) fn millis_from_civil(t: CivilTime) -> u64 {
    let days = days_from_civil(t.year, t.month, t.day);
    let seconds =
        days * 86400 + i64::from(t.hour) * 3600 + i64::from(t.minute) * 60 + i64::from(t.second);
    (seconds * 1000) as u64
}

/// Renders `Wed Jul 27 09:11:28 UTC 2016`.
pub(crate) fn format_utc(millis: u64) -> String {
    let t = civil_from_millis(millis);
    let days = days_from_civil(t.year, t.month, t.day);
    let weekday = WEEKDAYS[(days.rem_euclid(7) + 4) as usize % 7];
    format!(
        "{weekday} {month} {day:02} {hour:02}:{minute:02}:{second:02} UTC {year}",
        month = MONTHS[usize::from(t.month - 1)],
        day = t.day,
        hour = t.hour,
        minute = t.minute,
        second = t.second,
        year = t.year,
    )
}

/// Parses `Wed Jul 27 09:11:28 UTC 2016`; `None` for anything else.
pub(crate) fn parse_utc(text: &str) -> Option<CivilTime> {
    let mut fields = text.split_whitespace();
    let _weekday = fields.next()?;
    let month_name = fields.next()?;
    let day = fields.next()?;
    let clock = fields.next()?;
    let zone = fields.next()?;
    let year = fields.next()?;
    if fields.next().is_some() || zone != "UTC" {
        return None;
    }
    let month = MONTHS.iter().position(|m| *m == month_name)? as u8 + 1;
    let day: u8 = day.parse().ok()?;
    let year: i64 = year.parse().ok()?;
    let mut clock_fields = clock.split(':');
    let hour: u8 = clock_fields.next()?.parse().ok()?;
    let minute: u8 = clock_fields.next()?.parse().ok()?;
    let second: u8 = clock_fields.next()?.parse().ok()?;
    if clock_fields.next().is_some() || day == 0 || day > 31 || hour > 23 || minute > 59 || second > 59
    {
        return None;
    }
    Some(CivilTime {
        year,
        month,
        day,
        hour,
        minute,
        second,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats_like_the_factory_log() {
        // 2016-07-27 09:11:28 UTC was a Wednesday.
        let millis = millis_from_civil(CivilTime {
            year: 2016,
            month: 7,
            day: 27,
            hour: 9,
            minute: 11,
            second: 28,
        });
        assert_eq!(format_utc(millis), "Wed Jul 27 09:11:28 UTC 2016");
    }

    #[test]
    fn parse_inverts_format() {
        let millis = 1_469_610_688_000; // Wed Jul 27 09:11:28 UTC 2016
        let t = parse_utc(&format_utc(millis)).unwrap();
        assert_eq!(millis_from_civil(t), millis);
    }

    #[test]
    fn parse_rejects_other_shapes() {
        assert!(parse_utc("1st December 201511:04AM").is_none());
        assert!(parse_utc("Wed Jul 27 09:11:28 AEST 2016").is_none());
        assert!(parse_utc("Wed Jul 27 09:11 UTC 2016").is_none());
    }

    #[test]
    fn ordering_is_chronological() {
        let a = parse_utc("Wed Jul 27 09:11:28 UTC 2016").unwrap();
        let b = parse_utc("Wed Jul 27 09:11:29 UTC 2016").unwrap();
        let c = parse_utc("Thu Jul 28 00:00:00 UTC 2016").unwrap();
        assert!(a < b && b < c);
    }

    #[test]
    fn epoch_start_is_a_thursday() {
        assert_eq!(format_utc(0), "Thu Jan 01 00:00:00 UTC 1970");
    }
}
