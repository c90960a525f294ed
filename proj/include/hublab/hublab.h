/* C interface to the hub-labeling toolkit. All handles are opaque; every call
 * returns a status code and, on failure, leaves a message retrievable through
 * hublab_last_error() on the calling thread. Strings returned through char**
 * out-parameters are owned by the caller and released with hublab_string_free. */
#ifndef HUBLAB_H_
#define HUBLAB_H_

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hublab_status {
    HUBLAB_OK = 0,
    HUBLAB_ERR_INVALID_ARGUMENT = 1,
    HUBLAB_ERR_IO = 2,
    HUBLAB_ERR_PARSE = 3,
    HUBLAB_ERR_RESOURCE = 4,
    HUBLAB_ERR_RESAMPLE_EXHAUSTED = 5,
    HUBLAB_ERR_VERIFICATION = 6,
    HUBLAB_ERR_INVARIANT = 7,
    HUBLAB_ERR_OVERFLOW = 8,
    HUBLAB_ERR_INTERNAL = 9
} hublab_status;

typedef struct hublab_graph hublab_graph;
typedef struct hublab_family hublab_family;
typedef struct hublab_labels hublab_labels;

typedef enum hublab_family_kind { HUBLAB_FAMILY_H = 0, HUBLAB_FAMILY_G = 1, HUBLAB_FAMILY_GPRIME = 2 } hublab_family_kind;

typedef enum hublab_reduce_mode { HUBLAB_REDUCE_AUTO = 0, HUBLAB_REDUCE_ALWAYS = 1, HUBLAB_REDUCE_NEVER = 2 } hublab_reduce_mode;

typedef enum hublab_label_mode { HUBLAB_MODE_ORACLE = 0, HUBLAB_MODE_HUB = 1 } hublab_label_mode;

/* Zero-initialized options select the defaults. */
typedef struct hublab_options {
    uint32_t threads;        /* 0 -> 1 */
    uint64_t vertex_cap;     /* 0 -> 5,000,000 */
    uint64_t distance_cap;   /* max all-pairs entries, 0 -> 2^28 */
} hublab_options;

typedef struct hublab_build_config {
    uint32_t threshold;      /* D; 0 -> max(2, ceil(sqrt(ln n))) */
    uint64_t seed;
    uint32_t max_resamples;  /* 0 -> 32 */
    int reduce_mode;         /* hublab_reduce_mode */
} hublab_build_config;

const char* hublab_version(void);
const char* hublab_last_error(void);
const char* hublab_status_string(hublab_status status);
void hublab_string_free(char* s);

/* Graphs */
hublab_status hublab_graph_create(size_t n, const uint32_t* us, const uint32_t* vs, const int64_t* ws, size_t m,
                                  hublab_graph** out);
hublab_status hublab_graph_load(const char* path, hublab_graph** out);
hublab_status hublab_graph_save(const hublab_graph* g, const char* path);
size_t hublab_graph_num_vertices(const hublab_graph* g);
size_t hublab_graph_num_edges(const hublab_graph* g);
size_t hublab_graph_max_degree(const hublab_graph* g);
/* Exact distance, -1 when unreachable. */
hublab_status hublab_graph_distance(const hublab_graph* g, uint32_t u, uint32_t v, int64_t* out);
void hublab_graph_free(hublab_graph* g);

/* Family instances */
hublab_status hublab_family_generate(int kind, uint32_t b, uint32_t ell, const char* remove_file,
                                     const hublab_options* opts, hublab_family** out);
hublab_status hublab_family_load(const char* graph_path, const char* meta_path, hublab_family** out);
hublab_status hublab_family_save(const hublab_family* f, const char* graph_path, const char* meta_path);
/* New handle holding a copy of the instance graph. */
hublab_status hublab_family_graph(const hublab_family* f, hublab_graph** out);
/* Vertex id of v_{level, coords}; coords has ell entries. */
hublab_status hublab_family_vertex(const hublab_family* f, uint32_t level, const uint32_t* coords, uint32_t* out);
void hublab_family_free(hublab_family* f);

/* Labelings */
hublab_status hublab_labels_load(const char* path, hublab_labels** out);
hublab_status hublab_labels_save(const hublab_labels* l, const char* path);
size_t hublab_labels_num_vertices(const hublab_labels* l);
uint64_t hublab_labels_total_size(const hublab_labels* l);
/* Hub query; -1 when the hub sets are disjoint. */
int64_t hublab_labels_query(const hublab_labels* l, uint32_t u, uint32_t v);
hublab_status hublab_labels_stats(const hublab_labels* l, char** report_json);
hublab_status hublab_labels_baseline(const hublab_graph* g, const hublab_options* opts, hublab_labels** out);
void hublab_labels_free(hublab_labels* l);

/* Cover verification; *valid is set to 1 or 0. */
hublab_status hublab_verify(const hublab_graph* g, const hublab_labels* l, const hublab_options* opts,
                            char** report_json, int* valid);
hublab_status hublab_closure(const hublab_graph* g, const hublab_labels* l, hublab_labels** out);

/* Sparse-graph construction. The report embeds stage sizes and the size ledger. */
hublab_status hublab_build(const hublab_graph* g, const hublab_build_config* cfg, const hublab_options* opts,
                           hublab_labels** out, char** report_json);

/* Size-vs-threshold sweep; every row is verified. Wall times live under "timing". */
hublab_status hublab_bench(const hublab_graph* g, const uint32_t* thresholds, size_t count, uint64_t seed,
                           uint32_t max_resamples, const hublab_options* opts, char** report_json);

/* Audits. sample = 0 runs exhaustively. *pass is set to 1 or 0. */
hublab_status hublab_audit_lemma1(const hublab_family* f, uint64_t sample, uint64_t seed, char** report_json,
                                  int* pass);
hublab_status hublab_audit_counting(const hublab_family* f, const hublab_labels* l, const hublab_options* opts,
                                    char** report_json, int* pass);

/* Sum-Index protocol. With sweep != 0 all (a, b) pairs are run; otherwise the single
 * pair (a, b_index). *all_correct is 1 when every decoded bit matched. */
hublab_status hublab_sumindex(uint32_t b, uint32_t ell, const char* bits, uint64_t a, uint64_t b_index, int sweep,
                              int mode, const hublab_build_config* hub_cfg, const hublab_options* opts,
                              char** transcript_csv, char** summary_json, int* all_correct);

#ifdef __cplusplus
}
#endif

#endif /* HUBLAB_H_ */
