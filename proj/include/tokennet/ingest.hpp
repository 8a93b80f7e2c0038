#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "tokennet/date.hpp"

namespace tokennet {

/// One token transfer. Addresses are opaque ids, case-normalized to lowercase.
struct TransferRecord {
    std::string from_address;
    std::string to_address;
    double value = 0.0;  // non-negative token amount
    UnixTime timestamp = 0;

    bool operator==(const TransferRecord&) const = default;
};

enum class TransferFormat { csv, jsonl };

/// Parses transfers from a csv (header row required, columns from_address,
/// to_address, value, block_timestamp in any order) or jsonl stream.
/// Zero-value rows are kept; filtering is a graph-build decision.
/// Throws MissingColumn / MalformedRow.
std::vector<TransferRecord> parse_transfers(std::istream& in, TransferFormat format);

/// Partitions records into UTC calendar-day buckets, input order preserved
/// within a bucket. Days without records are absent.
std::map<Day, std::vector<TransferRecord>> bucket_by_day(
    const std::vector<TransferRecord>& records);

struct EconPoint {
    Day date = 0;
    double price_usd = 0.0;
    double vty_day_ret_30d = 0.0;
    std::optional<double> tvl_usd;
};

/// Daily economic series, dates strictly increasing.
struct EconSeries {
    std::vector<EconPoint> points;
    bool has_tvl = false;
};

/// Parses `date,PriceUSD,VtyDayRet30d[,tvlUSD]`.
/// Throws DuplicateDate / NonPositivePrice / MalformedRow / MissingColumn.
EconSeries parse_econ_series(std::istream& in);

enum class AccountKind { eoa, ca, unknown };

std::string to_string(AccountKind k);

/// Address annotations: account kind plus an optional free-form tag.
struct LabelMap {
    struct Entry {
        AccountKind kind = AccountKind::unknown;
        std::string tag;
    };
    std::unordered_map<std::string, Entry> entries;

    AccountKind kind_of(const std::string& address) const {
        auto it = entries.find(address);
        return it == entries.end() ? AccountKind::unknown : it->second.kind;
    }
};

/// Parses `address,kind,tag` with kind in {EOA, CA}.
LabelMap parse_labels(std::istream& in);

void write_transfers_csv(std::ostream& out, const std::vector<TransferRecord>& records);
void write_econ_csv(std::ostream& out, const EconSeries& series);
void write_labels_csv(std::ostream& out, const LabelMap& labels);

}  // namespace tokennet
