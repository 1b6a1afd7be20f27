// SPDX-License-Identifier: Apache-2.0

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <exception>
#include <iostream>
#include <map>
#include <mutex>
#include <thread>

#include "pxmap/datagen.h"
#include "pxmap/error.h"

namespace pxmap {

namespace {

struct Produced {
    TrainingRecord record;
    RecordTraits traits;
    uint32_t attempts = 0;
};

Produced ProduceRecord(const GenConfig &cfg, uint64_t index, const MerlLibrary &library) {
    for (uint32_t retry = 0; retry < uint32_t(cfg.max_retries); ++retry) {
        SampleResult r = SampleRecord(cfg, index, retry, library);
        if (!r.discarded) return {std::move(r.record), r.traits, retry + 1};
    }
    throw Error(Errc::ConfigInvalid, "record " + std::to_string(index) + " discarded " +
                                         std::to_string(cfg.max_retries) +
                                         " times; configuration cannot produce bright maps");
}

}  // namespace

GenStats Generate(const GenConfig &cfg_in, uint64_t count, int workers, RecordSink &sink,
                  const MerlLibrary &library) {
    cfg_in.Validate();
    if (count < 1) throw Error(Errc::ConfigInvalid, "count must be >= 1");
    if (workers < 1) throw Error(Errc::ConfigInvalid, "workers must be >= 1");

    GenConfig cfg = cfg_in;
    if (cfg.material_mode == MaterialMode::Mixed && cfg.merl_fraction > 0 && library.empty()) {
        std::clog << "warning: no MERL tables loaded; merl_fraction forced to 0\n";
        cfg.merl_fraction = 0;
    }

    auto start = std::chrono::steady_clock::now();

    // Workers claim indices from a shared counter and park results in an
    // ordered map; this thread drains it strictly in index order. The window
    // bounds how far producers may run ahead of the writer.
    const uint64_t window = uint64_t(workers) * 64;
    std::atomic<uint64_t> next{0};
    std::mutex mu;
    std::condition_variable ready_cv, space_cv;
    std::map<uint64_t, Produced> ready;
    uint64_t written = 0;
    bool abort = false;
    std::exception_ptr failure;

    auto work = [&] {
        for (;;) {
            uint64_t idx = next.fetch_add(1);
            if (idx >= count) return;
            {
                std::unique_lock lock(mu);
                space_cv.wait(lock, [&] { return abort || idx < written + window; });
                if (abort) return;
            }
            try {
                Produced p = ProduceRecord(cfg, idx, library);
                std::lock_guard lock(mu);
                ready.emplace(idx, std::move(p));
            } catch (...) {
                std::lock_guard lock(mu);
                if (!failure) failure = std::current_exception();
                abort = true;
            }
            ready_cv.notify_all();
            space_cv.notify_all();
        }
    };

    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (int i = 0; i < workers; ++i) pool.emplace_back(work);

    GenStats stats;
    uint64_t shadow = 0, empty_wall = 0, ambient = 0, disc = 0, merl = 0, refl = 0;
    try {
        while (written < count) {
            Produced p;
            {
                std::unique_lock lock(mu);
                ready_cv.wait(lock, [&] { return abort || ready.count(written) > 0; });
                if (abort) break;
                auto it = ready.find(written);
                p = std::move(it->second);
                ready.erase(it);
            }
            sink.Write(p.record);
            stats.attempts += p.attempts;
            shadow += p.traits.shadow_sampled;
            empty_wall += p.traits.wall_empty;
            ambient += p.traits.ambient;
            disc += p.traits.discontinuity;
            merl += p.traits.merl;
            refl += uint64_t(p.traits.reflections);
            {
                std::lock_guard lock(mu);
                ++written;
            }
            space_cv.notify_all();
        }
    } catch (...) {
        {
            std::lock_guard lock(mu);
            if (!failure) failure = std::current_exception();
            abort = true;
        }
        space_cv.notify_all();
    }
    pool.clear();
    if (failure) std::rethrow_exception(failure);

    double n = double(count);
    stats.generated = count;
    stats.discarded = stats.attempts - count;
    stats.shadow_fraction = shadow / n;
    stats.empty_wall_fraction = empty_wall / n;
    stats.ambient_fraction = ambient / n;
    stats.discontinuity_fraction = disc / n;
    stats.merl_fraction = merl / n;
    stats.mean_reflections = refl / n;
    stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    stats.records_per_second = stats.seconds > 0 ? n / stats.seconds : 0;
    return stats;
}

}  // namespace pxmap
