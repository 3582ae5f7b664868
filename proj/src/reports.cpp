#include "spraylab/reports.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "spraylab/text.hpp"

namespace spraylab {

const char* const kDeliveredHeader =
    "# time  ID  size  hopcount  deliveryTime  fromHost  toHost  remainingTtl  isResponse  path";

std::string connectivity_line(const ContactEvent& ev) {
    const std::string& a = std::min(ev.host1, ev.host2);
    const std::string& b = std::max(ev.host1, ev.host2);
    return format_time(ev.time) + " CONN " + a + " " + b + (ev.up ? " up" : " down");
}

std::string delivered_line(const DeliveryRecord& rec) {
    std::ostringstream out;
    out << format_time(rec.time) << ' ' << rec.id << ' ' << rec.size << ' ' << rec.hopcount
        << ' ' << format_time(rec.latency) << ' ' << rec.from_host << ' ' << rec.to_host << ' '
        << format_time(rec.remaining_ttl) << " N ";
    for (std::size_t i = 0; i < rec.path.size(); ++i) {
        if (i) out << "->";
        out << rec.path[i];
    }
    return out.str();
}

void ConnectivityWriter::write(const ContactEvent& ev) {
    if (ev.time < last_time_)
        throw std::logic_error("connectivity events out of order: " + format_time(ev.time) +
                               " after " + format_time(last_time_));
    last_time_ = ev.time;
    out_ << connectivity_line(ev) << '\n';
    if (out_.fail()) throw std::runtime_error("connectivity report write failed");
}

DeliveredWriter::DeliveredWriter(std::ostream& out) : out_(out) {
    out_ << kDeliveredHeader << '\n';
    if (out_.fail()) throw std::runtime_error("delivered report write failed");
}

void DeliveredWriter::write(const DeliveryRecord& rec) {
    if (rec.time < last_time_)
        throw std::logic_error("delivery records out of order");
    last_time_ = rec.time;
    out_ << delivered_line(rec) << '\n';
    if (out_.fail()) throw std::runtime_error("delivered report write failed");
}

std::string write_connectivity(const std::vector<ContactEvent>& events) {
    std::ostringstream out;
    ConnectivityWriter writer(out);
    for (const auto& ev : events) writer.write(ev);
    return out.str();
}

std::string write_delivered(const std::vector<DeliveryRecord>& records) {
    std::ostringstream out;
    DeliveredWriter writer(out);
    for (const auto& rec : records) writer.write(rec);
    return out.str();
}

MessageStats finalize_stats(const RunCounters& counters,
                            const std::vector<DeliveryRecord>& deliveries,
                            const std::vector<double>& buffertimes) {
    MessageStats s;
    s.created = counters.created;
    s.started = counters.started;
    s.relayed = counters.relayed;
    s.aborted = counters.aborted;
    s.dropped = counters.dropped;
    s.delivered = counters.delivered;

    const double nan = std::nan("");
    s.delivery_prob = counters.created > 0
                          ? static_cast<double>(counters.delivered) / counters.created
                          : nan;
    if (counters.delivered > 0) {
        s.overhead_ratio =
            static_cast<double>(counters.relayed - counters.delivered) / counters.delivered;
        std::vector<double> latencies;
        latencies.reserve(deliveries.size());
        double latency_sum = 0.0, hop_sum = 0.0;
        for (const auto& d : deliveries) {
            latencies.push_back(d.latency);
            latency_sum += d.latency;
            hop_sum += d.hopcount;
        }
        s.latency_avg = latency_sum / latencies.size();
        s.hopcount_avg = hop_sum / latencies.size();
        std::sort(latencies.begin(), latencies.end());
        std::size_t n = latencies.size();
        s.latency_med = (n % 2 == 1) ? latencies[n / 2]
                                     : 0.5 * (latencies[n / 2 - 1] + latencies[n / 2]);
    } else {
        s.overhead_ratio = s.latency_avg = s.latency_med = s.hopcount_avg = nan;
        s.degenerate = true;
    }
    if (!buffertimes.empty()) {
        double sum = 0.0;
        for (double t : buffertimes) sum += t;
        s.buffertime_avg = sum / buffertimes.size();
    } else {
        s.buffertime_avg = nan;
    }
    return s;
}

std::string write_stats(const MessageStats& stats) {
    std::ostringstream out;
    out << "created: " << stats.created << '\n'
        << "started: " << stats.started << '\n'
        << "relayed: " << stats.relayed << '\n'
        << "aborted: " << stats.aborted << '\n'
        << "dropped: " << stats.dropped << '\n'
        << "delivered: " << stats.delivered << '\n'
        << "delivery_prob: " << format_fixed(stats.delivery_prob, 4) << '\n'
        << "overhead_ratio: " << format_fixed(stats.overhead_ratio, 4) << '\n'
        << "latency_avg: " << format_fixed(stats.latency_avg, 4) << '\n'
        << "latency_med: " << format_fixed(stats.latency_med, 4) << '\n'
        << "hopcount_avg: " << format_fixed(stats.hopcount_avg, 4) << '\n'
        << "buffertime_avg: " << format_fixed(stats.buffertime_avg, 4) << '\n';
    return out.str();
}

} // namespace spraylab
