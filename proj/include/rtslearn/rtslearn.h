/* C interface to the rtslearn simulation core. */
#ifndef RTSLEARN_H
#define RTSLEARN_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
    RTS_OK = 0,
    RTS_ERR_CONFIG = 1,   /* invalid or malformed configuration */
    RTS_ERR_NUMERIC = 2,  /* solver failed to reach tolerance */
    RTS_ERR_ARGUMENT = 3, /* bad argument: null pointer, unknown name, index out of range */
    RTS_ERR_INTERNAL = 4
} rts_status;

typedef struct rts_config rts_config;
typedef struct rts_result rts_result;

const char* rts_version(void);

/* Message for the most recent failing call on this thread. */
const char* rts_last_error(void);

rts_status rts_config_from_json(const char* json, rts_config** out);
void rts_config_free(rts_config* config);
rts_status rts_config_set_seed(rts_config* config, uint64_t seed);
/* Resolved configuration. The string is owned by the config handle. */
rts_status rts_config_to_json(const rts_config* config, const char** out);

/* threads = 0 uses every hardware thread; output never depends on it. */
rts_status rts_simulate(const rts_config* config, uint64_t replication, rts_result** out);
rts_status rts_ensemble(const rts_config* config, int reps, int threads, rts_result** out);
rts_status rts_moments(const rts_config* config, rts_result** out);
/* horizon = 0 keeps the preset horizon. */
rts_status rts_scenario(const char* name, uint64_t seed, int reps, int threads, int horizon,
                        rts_result** out);
size_t rts_scenario_count(void);
const char* rts_scenario_name(size_t index);
/* High-dimensional elasticity learning; config is its own JSON schema. */
rts_status rts_highdim(const char* json, int has_seed, uint64_t seed, rts_result** out);

/* A result is a list of named CSV tables plus a JSON summary. Strings are
   owned by the result and live until rts_result_free. */
size_t rts_result_count(const rts_result* result);
const char* rts_result_name(const rts_result* result, size_t index);
const char* rts_result_csv(const rts_result* result, size_t index);
const char* rts_result_summary_json(const rts_result* result);
void rts_result_free(rts_result* result);

#ifdef __cplusplus
}
#endif

#endif
