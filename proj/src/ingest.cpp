#include "tokennet/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "tokennet/csv.hpp"
#include "tokennet/error.hpp"

namespace tokennet {

namespace {

std::string lowercase(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::size_t column_index(const std::vector<std::string>& header, const std::string& name) {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw MissingColumn(name);
    return static_cast<std::size_t>(it - header.begin());
}

TransferRecord validate_record(TransferRecord rec, std::size_t line_no) {
    if (rec.from_address.empty() || rec.to_address.empty())
        throw MalformedRow(line_no, "empty address");
    if (!(rec.value >= 0.0)) throw MalformedRow(line_no, "negative or non-finite value");
    rec.from_address = lowercase(std::move(rec.from_address));
    rec.to_address = lowercase(std::move(rec.to_address));
    return rec;
}

std::vector<TransferRecord> parse_transfers_csv(std::istream& in) {
    std::string line;
    if (!csv::getline(in, line)) throw MissingColumn("from_address");
    auto header = csv::split_line(line);
    const std::size_t c_from = column_index(header, "from_address");
    const std::size_t c_to = column_index(header, "to_address");
    const std::size_t c_value = column_index(header, "value");
    const std::size_t c_ts = column_index(header, "block_timestamp");

    std::vector<TransferRecord> records;
    std::size_t line_no = 1;
    while (csv::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto fields = csv::split_line(line);
        if (fields.size() <= std::max({c_from, c_to, c_value, c_ts}))
            throw MalformedRow(line_no, "too few fields");
        TransferRecord rec;
        rec.from_address = fields[c_from];
        rec.to_address = fields[c_to];
        auto value = csv::parse_double(fields[c_value]);
        if (!value) throw MalformedRow(line_no, "unparseable value '" + fields[c_value] + "'");
        rec.value = *value;
        auto ts = parse_timestamp(fields[c_ts]);
        if (!ts) throw MalformedRow(line_no, "unparseable timestamp '" + fields[c_ts] + "'");
        rec.timestamp = *ts;
        records.push_back(validate_record(std::move(rec), line_no));
    }
    return records;
}

std::vector<TransferRecord> parse_transfers_jsonl(std::istream& in) {
    std::vector<TransferRecord> records;
    std::string line;
    std::size_t line_no = 0;
    while (csv::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        nlohmann::json obj = nlohmann::json::parse(line, nullptr, false);
        if (obj.is_discarded() || !obj.is_object())
            throw MalformedRow(line_no, "invalid json object");
        for (const char* key : {"from_address", "to_address", "value", "block_timestamp"}) {
            if (!obj.contains(key)) throw MissingColumn(key);
        }
        TransferRecord rec;
        if (!obj["from_address"].is_string() || !obj["to_address"].is_string())
            throw MalformedRow(line_no, "addresses must be strings");
        rec.from_address = obj["from_address"].get<std::string>();
        rec.to_address = obj["to_address"].get<std::string>();
        if (obj["value"].is_number()) {
            rec.value = obj["value"].get<double>();
        } else if (obj["value"].is_string()) {
            auto v = csv::parse_double(obj["value"].get<std::string>());
            if (!v) throw MalformedRow(line_no, "unparseable value");
            rec.value = *v;
        } else {
            throw MalformedRow(line_no, "value must be number or string");
        }
        if (obj["block_timestamp"].is_number_integer()) {
            rec.timestamp = obj["block_timestamp"].get<std::int64_t>();
        } else if (obj["block_timestamp"].is_string()) {
            auto ts = parse_timestamp(obj["block_timestamp"].get<std::string>());
            if (!ts) throw MalformedRow(line_no, "unparseable timestamp");
            rec.timestamp = *ts;
        } else {
            throw MalformedRow(line_no, "block_timestamp must be string or integer");
        }
        records.push_back(validate_record(std::move(rec), line_no));
    }
    return records;
}

}  // namespace

std::vector<TransferRecord> parse_transfers(std::istream& in, TransferFormat format) {
    return format == TransferFormat::csv ? parse_transfers_csv(in) : parse_transfers_jsonl(in);
}

std::map<Day, std::vector<TransferRecord>> bucket_by_day(
    const std::vector<TransferRecord>& records) {
    std::map<Day, std::vector<TransferRecord>> buckets;
    for (const auto& rec : records) buckets[day_of(rec.timestamp)].push_back(rec);
    return buckets;
}

EconSeries parse_econ_series(std::istream& in) {
    std::string line;
    if (!csv::getline(in, line)) throw MissingColumn("date");
    auto header = csv::split_line(line);
    const std::size_t c_date = column_index(header, "date");
    const std::size_t c_price = column_index(header, "PriceUSD");
    const std::size_t c_vty = column_index(header, "VtyDayRet30d");
    std::optional<std::size_t> c_tvl;
    if (auto it = std::find(header.begin(), header.end(), "tvlUSD"); it != header.end())
        c_tvl = static_cast<std::size_t>(it - header.begin());

    EconSeries series;
    series.has_tvl = c_tvl.has_value();
    std::size_t line_no = 1;
    while (csv::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto fields = csv::split_line(line);
        if (fields.size() <= std::max(c_date, std::max(c_price, c_vty)))
            throw MalformedRow(line_no, "too few fields");
        EconPoint pt;
        auto date = parse_day(fields[c_date]);
        if (!date) throw MalformedRow(line_no, "unparseable date '" + fields[c_date] + "'");
        pt.date = *date;
        if (!series.points.empty()) {
            if (series.points.back().date == pt.date) throw DuplicateDate(fields[c_date]);
            if (series.points.back().date > pt.date)
                throw MalformedRow(line_no, "dates not strictly increasing");
        }
        auto price = csv::parse_double(fields[c_price]);
        if (!price) throw MalformedRow(line_no, "unparseable PriceUSD");
        if (!(*price > 0.0)) throw NonPositivePrice(fields[c_date]);
        pt.price_usd = *price;
        auto vty = csv::parse_double(fields[c_vty]);
        if (!vty || *vty < 0.0) throw MalformedRow(line_no, "invalid VtyDayRet30d");
        pt.vty_day_ret_30d = *vty;
        if (c_tvl && *c_tvl < fields.size() && !fields[*c_tvl].empty()) {
            auto tvl = csv::parse_double(fields[*c_tvl]);
            if (!tvl || !(*tvl > 0.0)) throw MalformedRow(line_no, "invalid tvlUSD");
            pt.tvl_usd = *tvl;
        }
        series.points.push_back(pt);
    }
    return series;
}

std::string to_string(AccountKind k) {
    switch (k) {
        case AccountKind::eoa: return "EOA";
        case AccountKind::ca: return "CA";
        default: return "unknown";
    }
}

LabelMap parse_labels(std::istream& in) {
    std::string line;
    if (!csv::getline(in, line)) throw MissingColumn("address");
    auto header = csv::split_line(line);
    const std::size_t c_addr = column_index(header, "address");
    const std::size_t c_kind = column_index(header, "kind");
    std::optional<std::size_t> c_tag;
    if (auto it = std::find(header.begin(), header.end(), "tag"); it != header.end())
        c_tag = static_cast<std::size_t>(it - header.begin());

    LabelMap labels;
    std::size_t line_no = 1;
    while (csv::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto fields = csv::split_line(line);
        if (fields.size() <= std::max(c_addr, c_kind))
            throw MalformedRow(line_no, "too few fields");
        std::string addr = lowercase(fields[c_addr]);
        if (addr.empty()) throw MalformedRow(line_no, "empty address");
        if (labels.entries.count(addr)) throw MalformedRow(line_no, "duplicate address " + addr);
        LabelMap::Entry entry;
        if (fields[c_kind] == "EOA") {
            entry.kind = AccountKind::eoa;
        } else if (fields[c_kind] == "CA") {
            entry.kind = AccountKind::ca;
        } else {
            throw MalformedRow(line_no, "kind must be EOA or CA");
        }
        if (c_tag && *c_tag < fields.size()) entry.tag = fields[*c_tag];
        labels.entries.emplace(std::move(addr), std::move(entry));
    }
    return labels;
}

void write_transfers_csv(std::ostream& out, const std::vector<TransferRecord>& records) {
    out << "from_address,to_address,value,block_timestamp\n";
    for (const auto& rec : records) {
        out << rec.from_address << ',' << rec.to_address << ',' << csv::format_double(rec.value)
            << ',' << format_timestamp(rec.timestamp) << '\n';
    }
}

void write_econ_csv(std::ostream& out, const EconSeries& series) {
    out << (series.has_tvl ? "date,PriceUSD,VtyDayRet30d,tvlUSD" : "date,PriceUSD,VtyDayRet30d")
        << '\n';
    for (const auto& pt : series.points) {
        out << format_day(pt.date) << ',' << csv::format_double(pt.price_usd) << ','
            << csv::format_double(pt.vty_day_ret_30d);
        if (series.has_tvl) {
            out << ',';
            if (pt.tvl_usd) out << csv::format_double(*pt.tvl_usd);
        }
        out << '\n';
    }
}

void write_labels_csv(std::ostream& out, const LabelMap& labels) {
    out << "address,kind,tag\n";
    std::vector<const std::pair<const std::string, LabelMap::Entry>*> sorted;
    sorted.reserve(labels.entries.size());
    for (const auto& kv : labels.entries) sorted.push_back(&kv);
    std::sort(sorted.begin(), sorted.end(),
              [](auto* a, auto* b) { return a->first < b->first; });
    for (const auto* kv : sorted) {
        out << kv->first << ',' << to_string(kv->second.kind) << ','
            << csv::join({kv->second.tag}) << '\n';
    }
}

}  // namespace tokennet
